#include "folia/holonomy.hpp"

#include <cmath>

#include "folia/errors.hpp"
#include "folia/pointwise.hpp"

namespace folia {

GroupoidElement Chart::at(const Eigen::VectorXd& lambda, const Eigen::VectorXd& x) const {
    if (!source_parameterized()) throw InputError("chart is not source-parameterized");
    if (lambda.size() + x.size() != param_dim) throw InputError("chart parameter size mismatch");
    Eigen::VectorXd params(param_dim);
    if (lambda.size() > 0) params.head(lambda.size()) = lambda;
    if (x.size() > 0) params.tail(x.size()) = x;
    return eval(params);
}

Eigen::VectorXd Chart::source_map(const Eigen::VectorXd& params) const {
    return eval(params).source();
}

Eigen::VectorXd Chart::target_map(const Eigen::VectorXd& params) const {
    return eval(params).target();
}

Eigen::VectorXd Chart::kappa(const Eigen::VectorXd& params) const {
    if (!path_holonomy) throw InputError("kappa applies to path-holonomy charts only");
    Eigen::VectorXd out(param_dim);
    out.head(k) = -params.head(k);
    Eigen::VectorXd t = target_map(params);
    if (t.size() == 0)
        out.tail(n).setZero();  // base is a point
    else
        out.tail(n) = t;
    return out;
}

namespace {

// greedy selection of generator indices whose classes form a basis of the fiber at x
std::vector<int> minimal_generator_indices(const SingularSubalgebroid& B, const RatVec& x) {
    const auto& mod = B.module();
    const int ngen = mod.generator_count();
    RatMat accum;
    for (const auto& s : mod.syzygies()) {
        RatVec row;
        for (const auto& p : s) row.push_back(p.evaluate(x));
        accum.push_back(std::move(row));
    }
    int accum_rank = rank(accum);
    std::vector<int> chosen;
    for (int i = 0; i < ngen; ++i) {
        RatVec cls(ngen, Rat(0));
        cls[i] = 1;
        RatMat probe = accum;
        probe.push_back(cls);
        if (rank(std::move(probe)) > accum_rank) {
            accum.push_back(std::move(cls));
            ++accum_rank;
            chosen.push_back(i);
        }
    }
    return chosen;
}

}  // namespace

Chart path_holonomy_chart(const SingularSubalgebroid& B, const RatVec& base_point,
                          double lambda_radius, double base_radius, bool minimal,
                          FlowOptions opts) {
    std::vector<int> indices;
    if (minimal)
        indices = minimal_generator_indices(B, base_point);
    else
        for (int i = 0; i < B.generator_count(); ++i) indices.push_back(i);

    std::vector<FreeModuleElem> sections;
    for (int i : indices) sections.push_back(B.generators()[i]);

    Chart chart;
    chart.k = static_cast<int>(indices.size());
    chart.n = B.ambient().nvars();
    chart.param_dim = chart.k + chart.n;
    chart.path_holonomy = true;
    chart.generator_indices = indices;
    chart.provenance = "path-holonomy";
    for (std::size_t i = 0; i < indices.size(); ++i)
        chart.provenance += (i ? "," : "[") + std::to_string(indices[i]);
    chart.provenance += indices.empty() ? "[]" : "]";

    Box lbox = Box::cube(chart.k, lambda_radius);
    Box bbox = Box::cube(chart.n, base_radius);
    Eigen::VectorXd center = to_eigen(base_point);
    if (chart.n > 0) {
        bbox.lo += center;
        bbox.hi += center;
    }
    chart.param_box.lo = Eigen::VectorXd(chart.param_dim);
    chart.param_box.hi = Eigen::VectorXd(chart.param_dim);
    if (chart.k > 0) {
        chart.param_box.lo.head(chart.k) = lbox.lo;
        chart.param_box.hi.head(chart.k) = lbox.hi;
    }
    if (chart.n > 0) {
        chart.param_box.lo.tail(chart.n) = bbox.lo;
        chart.param_box.hi.tail(chart.n) = bbox.hi;
    }

    AmbientAlgebroid ambient = B.ambient();
    int kk = chart.k, nn = chart.n;
    chart.eval = [ambient, sections = std::move(sections), kk, nn,
                  opts](const Eigen::VectorXd& params) {
        Eigen::VectorXd lambda = params.head(kk);
        Eigen::VectorXd x = params.tail(nn);
        return path_holonomy_exp(ambient, sections, lambda, x, opts);
    };
    return chart;
}

Chart invert_chart(const Chart& U) {
    Chart out;
    out.param_dim = U.param_dim;
    out.param_box = U.param_box;
    out.provenance = "inverse(" + U.provenance + ")";
    auto base_eval = U.eval;
    out.eval = [base_eval](const Eigen::VectorXd& params) {
        return base_eval(params).inverse();
    };
    return out;
}

Chart compose_charts(const Chart& U1, const Chart& U2, double tol) {
    if (!U1.source_parameterized())
        throw InputError("compose_charts: the left factor must be source-parameterized");
    Chart out;
    out.param_dim = U1.k + U2.param_dim;
    out.provenance = "compose(" + U1.provenance + ", " + U2.provenance + ")";
    out.param_box.lo = Eigen::VectorXd(out.param_dim);
    out.param_box.hi = Eigen::VectorXd(out.param_dim);
    if (U1.k > 0) {
        out.param_box.lo.head(U1.k) = U1.param_box.lo.head(U1.k);
        out.param_box.hi.head(U1.k) = U1.param_box.hi.head(U1.k);
    }
    if (U2.param_dim > 0) {
        out.param_box.lo.tail(U2.param_dim) = U2.param_box.lo;
        out.param_box.hi.tail(U2.param_dim) = U2.param_box.hi;
    }
    if (U2.source_parameterized()) {
        out.k = U1.k + U2.k;  // not a plain lambda block, but still source-parameterized via U2
        out.n = U2.n;
    }
    const Chart left = U1;
    const Chart right = U2;
    out.eval = [left, right, tol](const Eigen::VectorXd& params) {
        Eigen::VectorXd l1 = params.head(left.k);
        Eigen::VectorXd u2 = params.tail(right.param_dim);
        GroupoidElement e2 = right.eval(u2);
        Eigen::VectorXd y = e2.target();
        if (y.size() == 0) y = Eigen::VectorXd(0);
        GroupoidElement e1 = left.at(l1, y);
        return e1.compose(e2, tol);
    };

    // composability probe: the s-image of U1 must meet the t-image of U2 (centers suffice for
    // our global charts; escape during evaluation signals an empty fibered product)
    Eigen::VectorXd mid = 0.5 * (out.param_box.lo + out.param_box.hi);
    try {
        out.eval(mid);
    } catch (const std::exception& e) {
        throw InputError(std::string("compose_charts: no composable samples (") + e.what() + ")");
    }
    return out;
}

Atlas path_holonomy_atlas(const SingularSubalgebroid& B, const std::vector<RatVec>& base_points,
                          int depth_bound, double lambda_radius, double base_radius,
                          FlowOptions opts) {
    if (base_points.empty()) throw InputError("atlas needs base points");
    Atlas atlas;
    atlas.depth = depth_bound;
    for (const auto& p : base_points)
        atlas.charts.push_back(path_holonomy_chart(B, p, lambda_radius, base_radius, true, opts));
    const std::size_t n_min = atlas.charts.size();
    for (std::size_t i = 0; i < n_min; ++i) atlas.charts.push_back(invert_chart(atlas.charts[i]));
    // finite compositions of the first chart with itself up to the depth bound
    if (depth_bound >= 2 && !atlas.charts.empty()) {
        Chart current = atlas.charts[0];
        for (int d = 2; d <= depth_bound; ++d) {
            current = compose_charts(atlas.charts[0], current);
            atlas.charts.push_back(current);
        }
    }
    return atlas;
}

KappaCheck check_kappa(const Chart& U, int nsamples, unsigned seed, double scale) {
    if (!U.path_holonomy) throw InputError("check_kappa needs a path-holonomy chart");
    std::mt19937_64 rng(seed);
    KappaCheck out;
    Box shrunk = U.param_box;
    Eigen::VectorXd mid = 0.5 * (shrunk.lo + shrunk.hi);
    shrunk.lo = mid + scale * (shrunk.lo - mid);
    shrunk.hi = mid + scale * (shrunk.hi - mid);
    for (int s = 0; s < nsamples; ++s) {
        Eigen::VectorXd u = shrunk.sample(rng);
        GroupoidElement direct = U.eval(u).inverse();
        GroupoidElement via_kappa = U.eval(U.kappa(u));
        out.max_dev = std::max(out.max_dev, direct.distance(via_kappa));
        ++out.samples;
    }
    return out;
}

int leafwise_fiber_dim(const SingularSubalgebroid& B, const RatVec& x) {
    Chart minimal = path_holonomy_chart(B, x);
    int pointwise_dim = fiber_dimension(B, x);
    if (minimal.k != pointwise_dim) {
        // prune and retry once; the greedy selection is already minimal, so a mismatch after the
        // retry indicates inconsistent module data
        Chart retry = path_holonomy_chart(B, x, 1.0, 2.0, true);
        if (retry.k != pointwise_dim)
            throw InputError("leafwise fiber dimension mismatch: chart has " +
                             std::to_string(retry.k) + " parameters, fiber has dimension " +
                             std::to_string(pointwise_dim));
    }
    return pointwise_dim;
}

namespace {

struct DirectionScan {
    std::optional<double> kernel_lambda;
    double kernel_distance = std::numeric_limits<double>::infinity();
    double best_recurrence = std::numeric_limits<double>::infinity();
    double best_recurrence_lambda = 0.0;
};

DirectionScan scan_direction(const std::function<double(double)>& dist_to_identity,
                             const KernelScanOptions& opts) {
    DirectionScan out;
    double prev2 = dist_to_identity(opts.step);
    double prev = dist_to_identity(2 * opts.step);
    for (double l = 3 * opts.step; l <= opts.lambda_max; l += opts.step) {
        double cur = dist_to_identity(l);
        if (prev < prev2 && prev <= cur) {
            // local minimum near l - step: polish by ternary search
            double a = l - 2 * opts.step, b = l;
            for (int it = 0; it < 160; ++it) {
                double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
                if (dist_to_identity(m1) < dist_to_identity(m2))
                    b = m2;
                else
                    a = m1;
            }
            double l_star = 0.5 * (a + b);
            double d_star = dist_to_identity(l_star);
            if (d_star < out.best_recurrence) {
                out.best_recurrence = d_star;
                out.best_recurrence_lambda = l_star;
            }
            if (d_star <= opts.tol && !out.kernel_lambda) {
                out.kernel_lambda = l_star;
                out.kernel_distance = d_star;
                return out;  // first return fixes the lattice
            }
        }
        prev2 = prev;
        prev = cur;
    }
    return out;
}

}  // namespace

SubgroupReport integrate_lie_subalgebra(const AmbientAlgebroid& g,
                                        const std::vector<Eigen::VectorXd>& basis,
                                        const KernelScanOptions& opts) {
    if (g.kind() == AmbientKind::Tangent) throw InputError("integrate_lie_subalgebra needs a matrix ambient");
    if (basis.empty()) throw InputError("empty subalgebra basis");
    const int r = g.rank();
    for (const auto& v : basis)
        if (v.size() != r) throw InputError("basis coefficient length mismatch");

    // bracket closure within the ambient structure constants; exact data enters as doubles, so
    // the residual check is a least-squares projection with a tight tolerance
    Eigen::MatrixXd span(r, static_cast<long>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j) span.col(static_cast<long>(j)) = basis[j];
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            Eigen::VectorXd br = Eigen::VectorXd::Zero(r);
            for (int a = 0; a < r; ++a)
                for (int b = 0; b < r; ++b) {
                    double f = basis[i][a] * basis[j][b];
                    if (f == 0.0) continue;
                    for (int k = 0; k < r; ++k)
                        br[k] += f * g.structure_constant(a, b, k).get_d();
                }
            Eigen::VectorXd resid = br - span * span.colPivHouseholderQr().solve(br);
            if (resid.norm() > 1e-9)
                throw InputError("subalgebra basis is not bracket-closed (witness pair " +
                                 std::to_string(i) + "," + std::to_string(j) + ")");
        }

    std::vector<Eigen::MatrixXd> mats;
    for (int a = 0; a < r; ++a) mats.push_back(to_eigen(g.realization()[a]));
    auto realize = [&](const Eigen::VectorXd& coeff) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(mats[0].rows(), mats[0].cols());
        for (int a = 0; a < r; ++a)
            if (coeff[a] != 0.0) m += coeff[a] * mats[a];
        return m;
    };

    SubgroupReport rep;
    rep.basis = basis;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(mats[0].rows(), mats[0].cols());

    // directions: the basis plus a few fixed-weight combinations for multidimensional input
    std::vector<Eigen::VectorXd> directions = basis;
    if (basis.size() >= 2)
        for (std::size_t i = 0; i + 1 < basis.size(); ++i) {
            Eigen::VectorXd mix = (basis[i] + basis[i + 1]).normalized();
            directions.push_back(mix);
        }

    for (std::size_t d = 0; d < directions.size(); ++d) {
        Eigen::VectorXd dir = directions[d];
        double nrm = realize(dir).norm();
        if (nrm == 0.0) continue;
        Eigen::MatrixXd m = realize(dir);
        auto dist = [&](double l) { return (matrix_exp(l * m) - id).norm(); };
        DirectionScan scan = scan_direction(dist, opts);
        if (scan.best_recurrence < rep.min_recurrence) {
            rep.min_recurrence = scan.best_recurrence;
            rep.min_recurrence_lambda = scan.best_recurrence_lambda;
        }
        if (scan.kernel_lambda) {
            rep.kernel.push_back({static_cast<int>(d), *scan.kernel_lambda, scan.kernel_distance});
            rep.kernel_found = true;
            rep.injectivity_radius = std::min(rep.injectivity_radius, *scan.kernel_lambda / 2.0);
        }
    }

    if (rep.kernel_found && rep.kernel.size() == directions.size())
        rep.closure_flag = "closed (heuristic)";
    else if (rep.kernel_found)
        rep.closure_flag = "closed along scanned kernel directions (heuristic)";
    else if (rep.min_recurrence < opts.near_tol)
        rep.closure_flag = "not closed (heuristic)";
    else
        rep.closure_flag = "no recurrence observed (heuristic: closed)";
    return rep;
}

TransformationHolonomy transformation_holonomy(const SingularSubalgebroid& B,
                                               const std::vector<RatVec>& base_samples,
                                               const KernelScanOptions& opts) {
    const AmbientAlgebroid& amb = B.ambient();
    if (amb.kind() != AmbientKind::LinearAction)
        throw InputError("transformation_holonomy needs a linear-action ambient");
    const int r = amb.rank();
    const int n = amb.nvars();
    // the module must be generated by the full action frame
    for (int a = 0; a < r; ++a) {
        FreeModuleElem ea = FreeModuleElem::unit(r, n, a);
        if (!B.module().contains(ea))
            throw InputError("module is not the full action module: frame section e" +
                             std::to_string(a + 1) + " is not a member");
    }

    std::vector<Eigen::MatrixXd> mats;
    for (int a = 0; a < r; ++a) mats.push_back(to_eigen(amb.realization()[a]));
    auto realize = [mats, r](const Eigen::VectorXd& theta) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(mats[0].rows(), mats[0].cols());
        for (int a = 0; a < r; ++a)
            if (theta[a] != 0.0) m += theta[a] * mats[a];
        return matrix_exp(m);
    };

    TransformationHolonomy out;
    out.group_element = realize;

    Chart chart;
    chart.k = r;
    chart.n = n;
    chart.param_dim = r + n;
    chart.path_holonomy = false;
    chart.provenance = "transformation-groupoid(" + amb.name() + ")";
    chart.param_box.lo = Eigen::VectorXd::Constant(chart.param_dim, -8.0);
    chart.param_box.hi = Eigen::VectorXd::Constant(chart.param_dim, 8.0);
    chart.eval = [realize, r, n](const Eigen::VectorXd& params) {
        Eigen::VectorXd theta = params.head(r);
        Eigen::VectorXd x = params.tail(n);
        return GroupoidElement::pair(realize(theta) * x, x);
    };
    out.action_chart = chart;
    out.atlas.charts.push_back(chart);
    out.atlas.charts.push_back(invert_chart(chart));
    out.atlas.depth = 1;

    // kernel of the chart map: theta != 0 realizing the identity matrix along frame directions
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(mats[0].rows(), mats[0].cols());
    for (int a = 0; a < r; ++a) {
        auto dist = [&](double l) {
            Eigen::VectorXd theta = Eigen::VectorXd::Zero(r);
            theta[a] = l;
            return (realize(theta) - id).norm();
        };
        DirectionScan scan = scan_direction(dist, opts);
        if (scan.kernel_lambda)
            out.probe.chart_kernel.push_back({a, *scan.kernel_lambda, scan.kernel_distance});
    }

    // ideal-triviality probe: a bisection through (g, x0) into 1_M needs exp(theta(x)).x = x for
    // all x near x0; sample rings around the bases and look for solvable continuations
    for (const auto& base : base_samples) {
        Eigen::VectorXd x0 = to_eigen(base);
        for (int a = 0; a < r; ++a) {
            // candidate isotropy parameters at x0 along direction a
            auto fix_dist = [&](double l) {
                Eigen::VectorXd theta = Eigen::VectorXd::Zero(r);
                theta[a] = l;
                return (realize(theta) * x0 - x0).norm();
            };
            DirectionScan scan = scan_direction(fix_dist, opts);
            std::vector<double> candidates;
            if (scan.kernel_lambda) candidates.push_back(*scan.kernel_lambda);
            if (candidates.empty() && fix_dist(1.0) <= opts.tol && fix_dist(2.5) <= opts.tol) {
                // the whole direction fixes x0 (e.g. the origin of a rotation action); probe
                // representative nonzero parameters
                candidates = {M_PI / 2, M_PI};
            }
            for (double theta_star : candidates) {
                Eigen::VectorXd tvec = Eigen::VectorXd::Zero(r);
                tvec[a] = theta_star;
                if ((realize(tvec) - id).norm() <= opts.near_tol) continue;  // not a witness
                // try to continue the isotropy solution to nearby x
                bool extendable = true;
                for (int s = 0; s < 8 && extendable; ++s) {
                    Eigen::VectorXd x = x0;
                    double angle = 2 * M_PI * s / 8.0;
                    if (n >= 2) {
                        x[0] += 0.25 * std::cos(angle);
                        x[1] += 0.25 * std::sin(angle);
                    } else {
                        x[0] += (s % 2 ? 0.25 : -0.25);
                    }
                    double best = std::numeric_limits<double>::infinity();
                    for (double dl = -0.5; dl <= 0.5; dl += 1e-3) {
                        Eigen::VectorXd theta = Eigen::VectorXd::Zero(r);
                        theta[a] = theta_star + dl;
                        best = std::min(best, (realize(theta) * x - x).norm());
                    }
                    if (best > 1e-6) extendable = false;
                }
                if (extendable) {
                    out.probe.ideal_trivial = false;
                    out.probe.detail =
                        "bisection through a non-identity element maps into the units";
                }
            }
        }
    }
    if (out.probe.ideal_trivial && out.probe.detail.empty())
        out.probe.detail = "no sampled bisection through a non-identity element lands in the units";
    return out;
}

}  // namespace folia
