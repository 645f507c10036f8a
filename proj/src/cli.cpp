#include "folia/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>

#include "folia/errors.hpp"
#include "folia/json_io.hpp"
#include "folia/parser.hpp"
#include "folia/svg.hpp"

namespace folia::cli {

namespace {

std::vector<double> parse_double_csv(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stod(part));
    if (out.empty()) throw InputError("empty numeric list");
    return out;
}

std::vector<RatVec> parse_rat_points(const std::string& text) {
    std::vector<RatVec> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) out.push_back(rat_point_from_string(part));
    if (out.empty()) throw InputError("empty point list");
    return out;
}

// "lo:hi:count" with rational bounds, product over the base dimension
std::vector<RatVec> rational_grid(const std::string& spec, int dim) {
    auto c1 = spec.find(':');
    auto c2 = spec.rfind(':');
    if (c1 == std::string::npos || c2 == c1) throw InputError("grid spec must be lo:hi:count");
    Rat lo = rat_from_string(spec.substr(0, c1));
    Rat hi = rat_from_string(spec.substr(c1 + 1, c2 - c1 - 1));
    int count = std::stoi(spec.substr(c2 + 1));
    if (count < 2) throw InputError("grid count must be at least 2");
    RatVec axis;
    for (int i = 0; i < count; ++i) axis.push_back(lo + (hi - lo) * i / (count - 1));
    std::vector<RatVec> pts{{}};
    for (int d = 0; d < dim; ++d) {
        std::vector<RatVec> next;
        for (const auto& p : pts)
            for (const auto& v : axis) {
                RatVec q = p;
                q.push_back(v);
                next.push_back(q);
            }
        pts = std::move(next);
    }
    return pts;
}

std::vector<Eigen::VectorXd> double_grid(const std::string& spec, int dim) {
    std::vector<RatVec> pts = rational_grid(spec, dim);
    std::vector<Eigen::VectorXd> out;
    for (const auto& p : pts) out.push_back(to_eigen(p));
    return out;
}

void sink(const Json& j, const std::string& path, std::ostream& out, bool echo = false) {
    if (!path.empty()) write_json(j, path);
    if (echo) out << dump_json(j);
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << content;
}

struct Common {
    std::string json_path;
    unsigned seed = 12345;
    double tol = 1e-6;
    int degree_guard = 40;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--json", c.json_path, "write the JSON report to this path");
    cmd->add_option("--seed", c.seed, "random seed for sampled checks");
    cmd->add_option("--tol", c.tol, "equality tolerance for numerical checks");
    cmd->add_option("--degree-guard", c.degree_guard, "Buchberger total-degree bound");
}

GroebnerOptions gopts(const Common& c) {
    GroebnerOptions o;
    o.degree_guard = c.degree_guard;
    return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"folia: exact and numerical computation with singular subalgebroids"};
    app.require_subcommand(1);

    // ---- check ----
    auto* cmd_check = app.add_subcommand("check", "involutivity of a module");
    std::string check_file;
    Common check_c;
    cmd_check->add_option("file", check_file, "module file (.sfo)")->required();
    add_common(cmd_check, check_c);

    // ---- dims ----
    auto* cmd_dims = app.add_subcommand("dims", "pointwise fiber dimensions and isotropy");
    std::string dims_file, dims_point, dims_grid;
    Common dims_c;
    cmd_dims->add_option("file", dims_file)->required();
    cmd_dims->add_option("--point", dims_point, "rational point, e.g. 1/2,0");
    cmd_dims->add_option("--grid", dims_grid, "rational grid lo:hi:count");
    add_common(cmd_dims, dims_c);

    // ---- proj ----
    auto* cmd_proj = app.add_subcommand("proj", "projectivity scan over sample points");
    std::string proj_file, proj_points, proj_grid;
    Common proj_c;
    cmd_proj->add_option("file", proj_file)->required();
    cmd_proj->add_option("--points", proj_points, "semicolon-separated rational points");
    cmd_proj->add_option("--grid", proj_grid, "rational grid lo:hi:count");
    add_common(cmd_proj, proj_c);

    // ---- leaf ----
    auto* cmd_leaf = app.add_subcommand("leaf", "same-leaf search between two points");
    std::string leaf_file, leaf_from, leaf_to, leaf_path_out;
    std::size_t leaf_budget = 100000;
    Common leaf_c;
    cmd_leaf->add_option("file", leaf_file)->required();
    cmd_leaf->add_option("--from", leaf_from)->required();
    cmd_leaf->add_option("--to", leaf_to)->required();
    cmd_leaf->add_option("--budget", leaf_budget, "node expansion budget");
    cmd_leaf->add_option("--path", leaf_path_out, "write the replayable path JSON here");
    add_common(cmd_leaf, leaf_c);

    // ---- graph-eq ----
    auto* cmd_geq = app.add_subcommand("graph-eq", "sampled graph comparison of two modules");
    std::string geq_a, geq_b, geq_grid = "-2:2:7";
    Common geq_c;
    cmd_geq->add_option("first", geq_a)->required();
    cmd_geq->add_option("second", geq_b)->required();
    cmd_geq->add_option("--grid", geq_grid, "grid lo:hi:count");
    add_common(cmd_geq, geq_c);

    // ---- exp ----
    auto* cmd_exp = app.add_subcommand("exp", "path-holonomy exponential");
    std::string exp_file, exp_lambda, exp_point, exp_atlas, exp_atlas_points;
    int exp_atlas_depth = 3;
    Common exp_c;
    cmd_exp->add_option("file", exp_file)->required();
    cmd_exp->add_option("--lambda", exp_lambda, "coefficients, comma-separated")->required();
    cmd_exp->add_option("--point", exp_point, "base point (doubles), empty for a point base");
    cmd_exp->add_option("--atlas", exp_atlas, "also dump a path-holonomy atlas to this path");
    cmd_exp->add_option("--atlas-points", exp_atlas_points, "rational base points for the atlas");
    cmd_exp->add_option("--atlas-depth", exp_atlas_depth, "composition depth bound");
    add_common(cmd_exp, exp_c);

    // ---- family ----
    auto* cmd_family = app.add_subcommand("family", "1-parameter bisection group and its probes");
    std::string fam_file, fam_section, fam_point;
    double fam_box = 1.0, fam_lradius = 1.0, fam_period_max = 0.0;
    int fam_triples = 200;
    Common fam_c;
    cmd_family->add_option("file", fam_file)->required();
    cmd_family->add_option("--section", fam_section, "module element expression")->required();
    cmd_family->add_option("--box", fam_box, "half-width of the supporting box");
    cmd_family->add_option("--lambda-radius", fam_lradius);
    cmd_family->add_option("--triples", fam_triples, "random (lambda,mu,x) samples");
    cmd_family->add_option("--period-scan", fam_period_max, "scan for a period up to this lambda");
    cmd_family->add_option("--point", fam_point, "sample point for the period scan");
    add_common(cmd_family, fam_c);

    // ---- integrate ----
    auto* cmd_int = app.add_subcommand("integrate", "matrix Lie subalgebra integration");
    std::string int_file, int_basis;
    double int_lmax = 20.0, int_step = 1e-3;
    Common int_c;
    cmd_int->add_option("file", int_file)->required();
    cmd_int->add_option("--subalgebra", int_basis,
                        "basis coefficient vectors, ';'-separated (defaults to the generators)");
    cmd_int->add_option("--lambda-max", int_lmax, "kernel scan range");
    cmd_int->add_option("--step", int_step, "kernel scan step");
    add_common(cmd_int, int_c);

    // ---- differentiate ----
    auto* cmd_diff = app.add_subcommand("differentiate", "differentiate a bisection family");
    std::string diff_file, diff_family, diff_base;
    double diff_h = 1e-4;
    Common diff_c;
    cmd_diff->add_option("file", diff_file)->required();
    cmd_diff->add_option("--family", diff_family,
                         "coefficient polynomials in (l, vars), ';'-separated")
        ->required();
    cmd_diff->add_option("--base", diff_base, "rational chart base point (default origin)");
    cmd_diff->add_option("--fd-step", diff_h, "central-difference step");
    add_common(cmd_diff, diff_c);

    // ---- counterexample ----
    auto* cmd_ce = app.add_subcommand("counterexample", "the graph counterexamples");
    std::string ce_which, ce_file, ce_family = "(1+l)*x", ce_arc = "-0.785398163:0.785398163";
    Common ce_c;
    cmd_ce->add_option("which", ce_which, "openness | subspace")->required();
    cmd_ce->add_option("--file", ce_file, "module file for the subspace demo");
    cmd_ce->add_option("--family", ce_family, "family c_lambda(x) for the subspace demo");
    cmd_ce->add_option("--arc", ce_arc, "control arc lo:hi for the openness check");
    add_common(cmd_ce, ce_c);

    // ---- render ----
    auto* cmd_render = app.add_subcommand("render", "SVG rendering of leaves, ranks and traces");
    std::string ren_file, ren_out, ren_mode = "heat", ren_section, ren_point;
    double ren_lo = -2.0, ren_hi = 2.0, ren_time = 3.0, ren_lmax = 6.283185307;
    int ren_cells = 41, ren_seeds = 12;
    Common ren_c;
    cmd_render->add_option("file", ren_file)->required();
    cmd_render->add_option("--out", ren_out, "output SVG path")->required();
    cmd_render->add_option("--mode", ren_mode, "heat | flows | family");
    cmd_render->add_option("--lo", ren_lo);
    cmd_render->add_option("--hi", ren_hi);
    cmd_render->add_option("--cells", ren_cells);
    cmd_render->add_option("--seeds", ren_seeds);
    cmd_render->add_option("--time", ren_time);
    cmd_render->add_option("--section", ren_section, "generator expression for family mode");
    cmd_render->add_option("--point", ren_point, "start point for family mode");
    cmd_render->add_option("--lambda-max", ren_lmax);
    add_common(cmd_render, ren_c);

    std::vector<const char*> argv;
    argv.push_back("folia");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 1;
    }

    try {
        for (const Common* c : {&check_c, &dims_c, &proj_c, &leaf_c, &geq_c, &exp_c, &fam_c,
                                &int_c, &diff_c, &ce_c, &ren_c})
            if (c->tol <= 0) throw InputError("tolerances must be positive");

        if (*cmd_check) {
            SingularSubalgebroid B = load_subalgebroid(check_file, gopts(check_c));
            const Involutivity& inv = B.check_involutive();
            Json j;
            j["schema"] = "folia/check/1";
            j["involutive"] = inv.state == Involutivity::State::Verified;
            if (inv.state == Involutivity::State::Refuted) {
                const auto& amb = B.ambient();
                j["witness"] = Json({{"i", inv.witness_i},
                                     {"j", inv.witness_j},
                                     {"bracket", inv.witness_bracket.to_string(
                                                     amb.var_names(), amb.frame_names())}});
            }
            sink(j, check_c.json_path, out);
            if (inv.state == Involutivity::State::Verified) {
                out << "involutive: yes\n";
                return 0;
            }
            out << "involutive: no (witness pair " << inv.witness_i << "," << inv.witness_j
                << ")\n";
            return 2;
        }

        auto require_involutive = [&](const SingularSubalgebroid& B) {
            if (B.check_involutive().state != Involutivity::State::Verified) {
                err << "module is not involutive (witness pair " << B.involutivity().witness_i
                    << "," << B.involutivity().witness_j << ")\n";
                return false;
            }
            return true;
        };

        if (*cmd_dims) {
            SingularSubalgebroid B = load_subalgebroid(dims_file, gopts(dims_c));
            if (!require_involutive(B)) return 2;
            std::vector<RatVec> pts;
            if (!dims_point.empty()) pts.push_back(rat_point_from_string(dims_point));
            if (!dims_grid.empty()) {
                auto grid = rational_grid(dims_grid, B.ambient().nvars());
                pts.insert(pts.end(), grid.begin(), grid.end());
            }
            if (pts.empty() && B.ambient().nvars() == 0) pts.push_back(RatVec{});
            if (pts.empty()) throw InputError("dims needs --point or --grid");
            Json arr = Json::array();
            for (const auto& p : pts) {
                FiberReport rep = fiber_report(B, p);
                arr.push_back(json_of(rep, B));
                out << "point (" << to_string(p) << "): dim_fiber=" << rep.dim_fiber
                    << " dim_ev=" << rep.dim_ev << " dim_isotropy=" << rep.dim_isotropy << "\n";
            }
            Json j = pts.size() == 1 ? arr[0] : Json{{"schema", "folia/dims-grid/1"}, {"reports", arr}};
            sink(j, dims_c.json_path, out);
            return 0;
        }

        if (*cmd_proj) {
            SingularSubalgebroid B = load_subalgebroid(proj_file, gopts(proj_c));
            if (!require_involutive(B)) return 2;
            std::vector<RatVec> pts;
            if (!proj_points.empty()) pts = parse_rat_points(proj_points);
            if (!proj_grid.empty()) {
                auto grid = rational_grid(proj_grid, B.ambient().nvars());
                pts.insert(pts.end(), grid.begin(), grid.end());
            }
            if (pts.empty()) throw InputError("proj needs --points or --grid");
            ProjectivityReport rep = projectivity_scan(B, pts);
            out << "verdict: "
                << (rep.verdict == ProjectivityReport::Verdict::Projective
                        ? "projective (rank " + std::to_string(rep.rank) + ", sampled)"
                        : "non-projective")
                << "\n"
                << rep.smoothness_verdict << "\n";
            sink(json_of(rep), proj_c.json_path, out);
            return 0;
        }

        if (*cmd_leaf) {
            SingularSubalgebroid B = load_subalgebroid(leaf_file, gopts(leaf_c));
            SameLeafOptions opts;
            opts.budget = leaf_budget;
            Eigen::VectorXd p = to_eigen(parse_double_csv(leaf_from));
            Eigen::VectorXd q = to_eigen(parse_double_csv(leaf_to));
            SameLeafResult res = same_leaf(B, p, q, opts);
            out << "verdict: " << (res.yes ? "yes" : "unknown") << " (expanded " << res.expanded
                << " nodes)\n";
            sink(json_of(res), leaf_c.json_path, out);
            if (res.yes && !leaf_path_out.empty()) write_json(json_of(res.path), leaf_path_out);
            return 0;
        }

        if (*cmd_geq) {
            SingularSubalgebroid B1 = load_subalgebroid(geq_a, gopts(geq_c));
            SingularSubalgebroid B2 = load_subalgebroid(geq_b, gopts(geq_c));
            auto grid = double_grid(geq_grid, B1.ambient().nvars());
            GraphCompareReport rep = graph_equal_sample(B1, B2, grid);
            out << "agreements: " << rep.agreements << ", disagreements: " << rep.disagreements
                << ", both unknown: " << rep.both_unknown << "\n";
            sink(json_of(rep), geq_c.json_path, out);
            return 0;
        }

        if (*cmd_exp) {
            SingularSubalgebroid B = load_subalgebroid(exp_file, gopts(exp_c));
            Eigen::VectorXd lambda = to_eigen(parse_double_csv(exp_lambda));
            Eigen::VectorXd x =
                exp_point.empty() ? Eigen::VectorXd(0) : to_eigen(parse_double_csv(exp_point));
            GroupoidElement g = path_holonomy_exp(B, lambda, x);
            Json j = json_of(g);
            j["schema"] = "folia/exp/1";
            if (g.is_pair())
                out << "target: [" << g.as_pair().target.transpose() << "]\n";
            else
                out << "group element computed (see JSON)\n";
            sink(j, exp_c.json_path, out);
            if (!exp_atlas.empty()) {
                std::vector<RatVec> pts = exp_atlas_points.empty()
                                              ? std::vector<RatVec>{RatVec(B.ambient().nvars(), Rat(0))}
                                              : parse_rat_points(exp_atlas_points);
                Atlas atlas = path_holonomy_atlas(B, pts, exp_atlas_depth);
                write_json(json_of(atlas, 4, exp_c.seed), exp_atlas);
            }
            return 0;
        }

        if (*cmd_family) {
            SingularSubalgebroid B = load_subalgebroid(fam_file, gopts(fam_c));
            FreeModuleElem alpha = parse_section(fam_section, B.ambient());
            Box box = Box::cube(B.ambient().nvars(), fam_box);
            BisectionFamily family = one_parameter_group(B, alpha, box, fam_lradius);
            GroupLawReport law = group_law_probe(family, fam_triples, fam_c.seed);
            out << "group law max deviation: " << law.max_deviation << " over " << law.samples
                << " samples\n";
            Json j = json_of(law);
            if (fam_period_max > 0) {
                std::vector<Eigen::VectorXd> samples;
                if (!fam_point.empty()) samples.push_back(to_eigen(parse_double_csv(fam_point)));
                else if (B.ambient().nvars() > 0) {
                    std::mt19937_64 rng(fam_c.seed);
                    for (int i = 0; i < 3; ++i) samples.push_back(box.sample(rng));
                } else
                    samples.push_back(Eigen::VectorXd(0));
                auto period = family.detect_period(samples, fam_period_max, 1e-2, fam_c.tol);
                if (period) {
                    j["period"] = *period;
                    out << "period detected: " << *period << "\n";
                } else {
                    out << "no period within the scan range\n";
                }
            }
            sink(j, fam_c.json_path, out);
            return 0;
        }

        if (*cmd_int) {
            SingularSubalgebroid B = load_subalgebroid(int_file, gopts(int_c));
            std::vector<Eigen::VectorXd> basis;
            if (!int_basis.empty()) {
                std::stringstream ss(int_basis);
                std::string part;
                while (std::getline(ss, part, ';')) basis.push_back(to_eigen(parse_double_csv(part)));
            } else {
                for (const auto& g : B.generators()) {
                    Eigen::VectorXd v(B.ambient().rank());
                    for (int a = 0; a < B.ambient().rank(); ++a)
                        v[a] = g[a].constant_value().get_d();
                    basis.push_back(v);
                }
            }
            KernelScanOptions opts;
            opts.lambda_max = int_lmax;
            opts.step = int_step;
            SubgroupReport rep = integrate_lie_subalgebra(B.ambient(), basis, opts);
            out << "kernel " << (rep.kernel_found ? "found" : "not found");
            if (rep.kernel_found) out << " at lambda=" << rep.kernel.front().lambda;
            out << "; closure: " << rep.closure_flag << "\n";
            sink(json_of(rep), int_c.json_path, out);
            return 0;
        }

        if (*cmd_diff) {
            SingularSubalgebroid B = load_subalgebroid(diff_file, gopts(diff_c));
            if (!require_involutive(B)) return 2;
            RatVec base = diff_base.empty() ? RatVec(B.ambient().nvars(), Rat(0))
                                            : rat_point_from_string(diff_base);
            Chart chart = path_holonomy_chart(B, base);
            std::vector<std::string> fam_vars;
            fam_vars.push_back("l");
            for (const auto& v : B.ambient().var_names()) fam_vars.push_back(v);
            FamilySpec spec;
            spec.h = diff_h;
            std::stringstream ss(diff_family);
            std::string part;
            while (std::getline(ss, part, ';')) spec.coefficients.push_back(parse_poly(part, fam_vars));
            DifferentiationResult res = differentiate_family(B, chart, spec, diff_c.tol, 10, diff_c.seed);
            out << "derivative: "
                << res.section.to_string(B.ambient().var_names(), B.ambient().frame_names())
                << "\nmember: " << (res.member ? "yes" : "no")
                << ", max deviation: " << res.max_deviation << "\n";
            sink(json_of(res, B), diff_c.json_path, out);
            return 0;
        }

        if (*cmd_ce) {
            if (ce_which == "openness") {
                auto colon = ce_arc.find(':');
                if (colon == std::string::npos) throw InputError("arc spec must be lo:hi");
                double lo = std::stod(ce_arc.substr(0, colon));
                double hi = std::stod(ce_arc.substr(colon + 1));
                std::vector<Eigen::Vector2d> samples{Eigen::Vector2d::Zero()};
                for (int i = 0; i < 8; ++i) {
                    double a = 2 * M_PI * i / 8.0;
                    samples.push_back(Eigen::Vector2d(std::cos(a), std::sin(a)));
                    samples.push_back(Eigen::Vector2d(0.5 * std::cos(a), 0.5 * std::sin(a)));
                }
                OpennessReport rep = openness_counterexample(
                    lo, hi, samples, {M_PI / 2, M_PI, 3 * M_PI / 2}, {1e-1, 1e-2, 1e-3});
                out << (rep.pass() ? "openness counterexample verified"
                                   : "openness counterexample FAILED")
                    << ": " << rep.detail << "\n";
                sink(json_of(rep), ce_c.json_path, out);
                return rep.pass() ? 0 : 2;
            }
            if (ce_which == "subspace") {
                if (ce_file.empty()) throw InputError("subspace demo needs --file");
                SingularSubalgebroid B = load_subalgebroid(ce_file, gopts(ce_c));
                if (!require_involutive(B)) return 2;
                std::vector<std::string> fam_vars;
                fam_vars.push_back("l");
                for (const auto& v : B.ambient().var_names()) fam_vars.push_back(v);
                PolyFamily family;
                std::stringstream ss(ce_family);
                std::string part;
                while (std::getline(ss, part, ';')) family.components.push_back(parse_poly(part, fam_vars));
                std::vector<Eigen::VectorXd> val;
                val.push_back(Eigen::VectorXd::Constant(B.ambient().nvars(), 1.0));
                auto results = subspace_diffeology_differentiation(B, {family}, val);
                const auto& r = results[0];
                std::vector<std::string> vars = B.ambient().var_names();
                out << "derivative components:";
                for (const auto& d : r.derivative) out << " " << d.to_string(vars);
                out << "\nmember of the module: " << (r.member ? "yes" : "no") << "\n";
                Json j;
                j["schema"] = "folia/subspace/1";
                Json comps = Json::array();
                for (const auto& d : r.derivative) comps.push_back(d.to_string(vars));
                j["derivative"] = comps;
                j["member"] = r.member;
                j["leaf_preserving"] = r.leaf_preserving;
                sink(j, ce_c.json_path, out);
                return 0;
            }
            throw InputError("counterexample expects 'openness' or 'subspace'");
        }

        if (*cmd_render) {
            SingularSubalgebroid B = load_subalgebroid(ren_file, gopts(ren_c));
            std::string svg;
            if (ren_mode == "heat")
                svg = render_rank_heatmap(B, ren_lo, ren_hi, ren_cells);
            else if (ren_mode == "flows")
                svg = render_flow_paths(B, ren_lo, ren_hi, ren_seeds, ren_time);
            else if (ren_mode == "family") {
                if (ren_section.empty() || ren_point.empty())
                    throw InputError("family mode needs --section and --point");
                FreeModuleElem alpha = parse_section(ren_section, B.ambient());
                Box box = Box::cube(B.ambient().nvars(), std::max(std::abs(ren_lo), std::abs(ren_hi)));
                BisectionFamily family = one_parameter_group(B, alpha, box, ren_lmax);
                svg = render_family_trace(family, to_eigen(parse_double_csv(ren_point)), ren_lmax, 400);
            } else
                throw InputError("render mode must be heat, flows or family");
            write_text(ren_out, svg);
            out << "wrote " << ren_out << "\n";
            Json j;
            j["schema"] = "folia/render/1";
            j["mode"] = ren_mode;
            j["out"] = ren_out;
            j["bytes"] = svg.size();
            sink(j, ren_c.json_path, out);
            return 0;
        }
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const DegreeGuardError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const FlowEscapeError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const NumericalInconsistencyError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace folia::cli
