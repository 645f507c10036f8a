// Acceptance suite: runs every acceptance criterion at its stated tolerance and prints one
// pass/fail line per criterion. Exit code = number of failed criteria.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "folia/cli.hpp"
#include "folia/diffdiff.hpp"
#include "folia/errors.hpp"
#include "folia/graph.hpp"
#include "folia/json_io.hpp"
#include "folia/parser.hpp"
#include "test_util.hpp"

using namespace folia;
using namespace folia::testutil;

namespace {

SingularSubalgebroid load(const std::string& name) { return load_subalgebroid(data_path(name)); }

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

Eigen::VectorXd vec2(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

struct Check {
    bool ok = true;
    std::ostringstream detail;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.str().empty()) detail << "; ";
            detail << what;
        }
    }
};

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double n = static_cast<double>(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- criterion 1: exact algebra round trips under 30 s ----
bool criterion1(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    Check c;
    std::mt19937_64 rng(101);
    std::vector<SingularSubalgebroid> modules{load("vanish_origin.sfo"), load("hypersurface.sfo"),
                                              load("rotation.sfo")};
    int done = 0;
    for (std::size_t m = 0; m < modules.size(); ++m) {
        const auto& S = modules[m].module();
        const int quota = m + 1 == modules.size() ? 1000 - done : 333;
        for (int it = 0; it < quota; ++it, ++done) {
            FreeModuleElem e = random_elem(rng, S.rank(), S.nvars(), 3);
            NormalFormResult nf = S.normal_form(e);
            FreeModuleElem rebuilt = nf.remainder;
            for (int i = 0; i < S.generator_count(); ++i)
                rebuilt += nf.certificate[static_cast<std::size_t>(i)] *
                           S.generators()[static_cast<std::size_t>(i)];
            c.require(rebuilt == e, "division round trip failed");
        }
        for (const auto& s : S.syzygies()) {
            FreeModuleElem acc(S.rank(), S.nvars());
            for (int i = 0; i < S.generator_count(); ++i)
                acc += s[static_cast<std::size_t>(i)] * S.generators()[static_cast<std::size_t>(i)];
            c.require(acc.is_zero(), "syzygy residual is nonzero");
        }
    }
    c.require(done == 1000, "expected 1000 random sections");
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < 30.0, "runtime exceeded 30 s");
    std::ostringstream os;
    os << done << " sections, " << secs << " s";
    detail = c.ok ? os.str() : c.detail.str();
    return c.ok;
}

// ---- criterion 2: fiber dimension oracles under 5 s ----
bool criterion2(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    Check c;
    {
        SingularSubalgebroid B = load("x2dx.sfo");
        FiberReport a = fiber_report(B, {rat(0)});
        c.require(a.dim_ev == 0 && a.dim_isotropy == 1 && a.dim_fiber == 1, "<x^2 dx> at 0");
        FiberReport b = fiber_report(B, {rat(1)});
        c.require(b.dim_ev == 1 && b.dim_isotropy == 0 && b.dim_fiber == 1, "<x^2 dx> at 1");
    }
    {
        SingularSubalgebroid B = load("vanish_origin.sfo");
        c.require(fiber_dimension(B, {rat(0), rat(0)}) == 4, "vanishing module at 0");
        c.require(fiber_dimension(B, {rat(1), rat(0)}) == 2, "vanishing module at (1,0)");
        ProjectivityReport rep = projectivity_scan(B, {{rat(0), rat(0)}, {rat(1), rat(0)}});
        c.require(rep.verdict == ProjectivityReport::Verdict::NonProjective,
                  "codim-2 module must be non-projective");
    }
    {
        SingularSubalgebroid B = load("hypersurface.sfo");
        std::vector<RatVec> pts{{rat(0), rat(0)}, {rat(1), rat(0)}, {rat(0), rat(-1)},
                                {rat(2), rat(3)}, {rat(-1), rat(1, 2)}};
        ProjectivityReport rep = projectivity_scan(B, pts);
        c.require(rep.verdict == ProjectivityReport::Verdict::Projective && rep.rank == 2,
                  "hypersurface module must be projective of rank 2");
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < 5.0, "runtime exceeded 5 s");
    std::ostringstream os;
    os << "all oracle dimensions exact, " << secs << " s";
    detail = c.ok ? os.str() : c.detail.str();
    return c.ok;
}

// ---- criterion 3: SES identity at 100 random rational points per module, under 10 s ----
bool criterion3(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    Check c;
    std::mt19937_64 rng(103);
    int points = 0;
    for (const char* name :
         {"x2dx.sfo", "xdx.sfo", "ddx.sfo", "rotation.sfo", "vanish_origin.sfo",
          "hypersurface.sfo", "rotation_action.sfo"}) {
        SingularSubalgebroid B = load(name);
        const int n = B.ambient().nvars();
        for (int it = 0; it < 100; ++it, ++points) {
            RatVec x;
            for (int i = 0; i < n; ++i) x.push_back(random_rat(rng));
            FiberReport rep = fiber_report(B, x);
            c.require(rep.dim_fiber == rep.dim_ev + rep.dim_isotropy,
                      std::string("SES identity failed for ") + name);
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < 10.0, "runtime exceeded 10 s");
    std::ostringstream os;
    os << points << " points, " << secs << " s";
    detail = c.ok ? os.str() : c.detail.str();
    return c.ok;
}

// ---- criterion 4: the isotropy at the origin is gl(2), exactly ----
bool criterion4(std::string& detail) {
    Check c;
    SingularSubalgebroid B = load("vanish_origin.sfo");
    FiberReport rep = fiber_report(B, {rat(0), rat(0)});
    c.require(rep.dim_isotropy == 4, "isotropy dimension must be 4");
    c.require(rep.jacobi_ok, "Jacobi identity must hold");
    std::vector<RatMat> basis(4, rat_mat(2, 2));
    basis[0][0][0] = 1;
    basis[1][0][1] = 1;
    basis[2][1][0] = 1;
    basis[3][1][1] = 1;
    for (int a = 0; a < 4 && c.ok; ++a)
        for (int b = 0; b < 4 && c.ok; ++b) {
            RatMat comm = rat_commutator(basis[b], basis[a]);
            for (int k = 0; k < 4; ++k)
                c.require(rep.structure_constant(a, b, k) == comm[k / 2][k % 2],
                          "structure constant differs from the matrix-commutator oracle");
        }
    detail = c.ok ? "gl(2) structure constants match the oracle exactly" : c.detail.str();
    return c.ok;
}

// ---- criterion 5: closed-form flows within 1e-6 at tol 1e-9; kappa within 1e-6 ----
bool criterion5(std::string& detail) {
    Check c;
    FlowOptions opts;  // tol 1e-9 by default
    std::vector<Poly> xdx{Poly::variable(1, 0)};
    std::vector<Poly> x2dx{Poly::variable(1, 0) * Poly::variable(1, 0)};
    c.require(std::abs(flow(xdx, vec1(1.0), 1.0, opts)[0] - std::exp(1.0)) < 1e-6,
              "x e^l closed form");
    c.require(std::abs(flow(x2dx, vec1(1.0), 0.5, opts)[0] - 2.0) < 1e-6,
              "x/(1-lx) closed form");
    SingularSubalgebroid rot = load("rotation.sfo");
    for (double theta : {0.3, 1.0, M_PI / 2, 2.5}) {
        GroupoidElement g = path_holonomy_exp(rot, vec1(theta), vec2(1.0, 0.0), opts);
        c.require((g.as_pair().target - vec2(std::cos(theta), std::sin(theta))).norm() < 1e-6,
                  "planar rotation closed form");
    }
    Chart U = path_holonomy_chart(rot, {rat(0), rat(0)});
    KappaCheck kappa = check_kappa(U, 100, 105);
    c.require(kappa.samples == 100 && kappa.max_dev < 1e-6, "kappa identity beyond 1e-6");
    std::ostringstream os;
    os << "flows exact to 1e-6, kappa max dev " << kappa.max_dev;
    detail = c.ok ? os.str() : c.detail.str();
    return c.ok;
}

// ---- criterion 6: group law on 200 random triples; derivative recovery within 1e-5 ----
bool criterion6(std::string& detail) {
    Check c;
    SingularSubalgebroid rot = load("rotation.sfo");
    BisectionFamily rot_fam = one_parameter_group(rot, rot.generators()[0], Box::cube(2, 4.0), 1.0);
    GroupLawReport rot_law = group_law_probe(rot_fam, 200, 106);
    c.require(rot_law.samples == 200 && rot_law.max_deviation < 1e-6,
              "rotation group law beyond 1e-6");

    SingularSubalgebroid xdx = load("xdx.sfo");
    BisectionFamily xdx_fam = one_parameter_group(xdx, xdx.generators()[0], Box::cube(1, 4.0), 1.0);
    GroupLawReport xdx_law = group_law_probe(xdx_fam, 200, 107);
    c.require(xdx_law.samples == 200 && xdx_law.max_deviation < 1e-6,
              "<x dx> group law beyond 1e-6");

    std::vector<Eigen::VectorXd> grid;
    for (double x : {-0.8, -0.3, 0.2, 0.7})
        for (double y : {-0.5, 0.0, 0.6}) grid.push_back(vec2(x, y));
    RecoveryReport rec = recover_generators(rot, Box::cube(2, 2.0), grid);
    c.require(rec.max_deviation < 1e-5, "rotation derivative recovery beyond 1e-5");
    std::vector<Eigen::VectorXd> grid1;
    for (double x : {-0.9, -0.4, 0.3, 0.8}) grid1.push_back(vec1(x));
    RecoveryReport rec1 = recover_generators(xdx, Box::cube(1, 1.0), grid1);
    c.require(rec1.max_deviation < 1e-5, "<x dx> derivative recovery beyond 1e-5");
    std::ostringstream os;
    os << "group law dev " << std::max(rot_law.max_deviation, xdx_law.max_deviation)
       << ", recovery dev " << std::max(rec.max_deviation, rec1.max_deviation);
    detail = c.ok ? os.str() : c.detail.str();
    return c.ok;
}

// ---- criterion 7: differentiation closure over 50 random family specs per module ----
bool criterion7(std::string& detail) {
    Check c;
    std::mt19937_64 rng(107);
    for (const char* name : {"x2dx.sfo", "rotation.sfo"}) {
        SingularSubalgebroid B = load(name);
        const int n = B.ambient().nvars();
        Chart chart = path_holonomy_chart(B, RatVec(static_cast<std::size_t>(n), rat(0)));
        std::vector<FreeModuleElem> results;
        for (int it = 0; it < 50; ++it) {
            FamilySpec spec;
            for (int i = 0; i < chart.k; ++i)
                spec.coefficients.push_back(Poly::variable(n + 1, 0) * random_poly(rng, n + 1, 2));
            // membership is the exact claim here; the fd guard only has to catch O(1) errors,
            // random-family curvature puts its truncation near 1e-5 at h = 1e-4
            DifferentiationResult res = differentiate_family(B, chart, spec, 1e-3, 4, 107);
            c.require(res.member, "differentiation result must be a member (exact certificate)");
            results.push_back(res.section);
        }
        for (std::size_t i = 0; i + 1 < results.size(); i += 2) {
            FreeModuleElem br = B.ambient().bracket(results[i], results[i + 1]);
            c.require(B.module().contains(br), "bracket of results must be a member");
        }
    }
    // finite-difference convergence order over h
    SingularSubalgebroid B = load("x2dx.sfo");
    Chart chart = path_holonomy_chart(B, {rat(0)});
    std::vector<double> lh, ld;
    for (double h : {4e-2, 2e-2, 1e-2, 5e-3}) {
        FamilySpec spec;
        spec.coefficients = {Poly::variable(2, 0)};
        spec.h = h;
        DifferentiationResult res = differentiate_family(B, chart, spec, 1.0, 8, 108);
        lh.push_back(std::log(h));
        ld.push_back(std::log(std::max(res.max_deviation, 1e-14)));
    }
    double slope = fit_slope(lh, ld);
    c.require(slope >= 1.5, "finite-difference convergence order below 1.5");
    std::ostringstream os;
    os << "100 random member families, brackets closed, fd order " << slope;
    detail = c.ok ? os.str() : c.detail.str();
    return c.ok;
}

// ---- criterion 8: graph equality on the seven-point grid; paths replay within 1e-5 ----
bool criterion8(std::string& detail) {
    Check c;
    SingularSubalgebroid B1 = load("xdx.sfo");
    SingularSubalgebroid B2 = load("x2dx.sfo");
    std::vector<Eigen::VectorXd> grid;
    for (double x : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) grid.push_back(vec1(x));
    GraphCompareReport rep = graph_equal_sample(B1, B2, grid);
    c.require(rep.disagreements == 0, "graphs of <x dx> and <x^2 dx> must agree on the grid");
    int replayed = 0;
    for (const auto& e : rep.entries) {
        if (!e.yes1) continue;
        SameLeafResult res = same_leaf(B1, e.p, e.q);
        if (res.yes) {
            Eigen::VectorXd end = replay_path(B1, res.path);
            c.require((end - res.path.end).norm() < 1e-5, "path replay beyond 1e-5");
            ++replayed;
        }
    }
    std::ostringstream os;
    os << rep.agreements << " agreements, 0 disagreements, " << replayed << " paths replayed";
    detail = c.ok ? os.str() : c.detail.str();
    return c.ok;
}

// ---- criterion 9: the subspace-diffeology counterexample refuses exactly ----
bool criterion9(std::string& detail) {
    Check c;
    SingularSubalgebroid B = load("x2dx.sfo");
    Poly l = Poly::variable(2, 0), x = Poly::variable(2, 1);
    PolyFamily dilation;
    dilation.components = {x + l * x};
    auto results = subspace_diffeology_differentiation(B, {dilation}, {vec1(1.0), vec1(0.5)});
    c.require(results.size() == 1, "one family expected");
    c.require(results[0].derivative[0] == Poly::variable(1, 0), "derivative must be x dx");
    c.require(!results[0].member, "x dx must be refused exactly");
    c.require(results[0].leaf_preserving, "the family preserves sampled leaves");
    detail = c.ok ? "derivative x dx refused by exact membership" : c.detail.str();
    return c.ok;
}

// ---- criterion 10: openness counterexample under 5 s ----
bool criterion10(std::string& detail) {
    auto t0 = std::chrono::steady_clock::now();
    Check c;
    std::vector<Eigen::Vector2d> samples{Eigen::Vector2d::Zero()};
    for (int i = 0; i < 8; ++i) {
        double a = 2 * M_PI * i / 8.0;
        samples.push_back(Eigen::Vector2d(std::cos(a), std::sin(a)));
        samples.push_back(Eigen::Vector2d(0.4 * std::cos(a), 0.4 * std::sin(a)));
    }
    OpennessReport rep = openness_counterexample(-M_PI / 4, M_PI / 4, samples,
                                                 {M_PI / 2, M_PI, 3 * M_PI / 2},
                                                 {1e-1, 1e-2, 1e-3});
    c.require(rep.saturation_matches, "saturation identity failed on samples");
    c.require(rep.witness_holds, "witness family failed");
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < 5.0, "runtime exceeded 5 s");
    std::ostringstream os;
    os << rep.samples_checked << " samples, " << secs << " s";
    detail = c.ok ? os.str() : c.detail.str();
    return c.ok;
}

// ---- criterion 11: Lie subalgebra integration ----
bool criterion11(std::string& detail) {
    Check c;
    AmbientAlgebroid so3 = AmbientAlgebroid::named(AmbientKind::LieAlgebra, "so3");
    Eigen::VectorXd z(3);
    z << 0, 0, 1;
    SubgroupReport rep = integrate_lie_subalgebra(so3, {z});
    c.require(rep.kernel_found, "so(2) kernel must be detected");
    if (rep.kernel_found)
        c.require(std::abs(rep.kernel.front().lambda - 2 * M_PI) < 1e-9,
                  "kernel must sit at 2 pi within 1e-9");
    c.require(rep.injectivity_radius >= M_PI - 1e-2, "injectivity radius must reach pi - 1e-2");

    AmbientAlgebroid t2 = AmbientAlgebroid::named(AmbientKind::LieAlgebra, "t2");
    Eigen::VectorXd dir(2);
    dir << 1.0, std::sqrt(2.0);
    KernelScanOptions opts;
    opts.lambda_max = 1000.0;
    opts.step = 2e-3;
    SubgroupReport torus = integrate_lie_subalgebra(t2, {dir}, opts);
    c.require(!torus.kernel_found, "irrational torus line must have no kernel within budget");
    c.require(torus.closure_flag == "not closed (heuristic)", "closure flag must be heuristic-open");
    std::ostringstream os;
    os << "kernel at " << rep.kernel.front().lambda << ", radius " << rep.injectivity_radius
       << "; torus min recurrence " << torus.min_recurrence;
    detail = c.ok ? os.str() : c.detail.str();
    return c.ok;
}

// ---- criterion 12: byte-identical JSON under a fixed seed ----
bool criterion12(std::string& detail) {
    Check c;
    auto run_once = [&](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        c.require(code == 0, "cli run failed: " + err.str());
        return out.str();
    };
    std::vector<std::vector<std::string>> commands{
        {"dims", data_path("vanish_origin.sfo"), "--grid", "-1:1:3", "--seed", "42", "--json",
         "acc_repro_a.json"},
        {"family", data_path("rotation.sfo"), "--section", "-y*dx + x*dy", "--seed", "42",
         "--json", "acc_repro_b.json"},
        {"integrate", data_path("so3_z.sfo"), "--seed", "42", "--json", "acc_repro_c.json"},
    };
    for (const auto& cmd : commands) {
        std::string first = run_once(cmd);
        std::ifstream fa(cmd.back());
        std::stringstream sa;
        sa << fa.rdbuf();
        std::string second = run_once(cmd);
        std::ifstream fb(cmd.back());
        std::stringstream sb;
        sb << fb.rdbuf();
        c.require(first == second, "stdout differs between runs");
        c.require(sa.str() == sb.str() && !sa.str().empty(), "JSON bytes differ between runs");
    }
    detail = c.ok ? "3 commands byte-identical across repeated runs" : c.detail.str();
    return c.ok;
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        std::function<bool(std::string&)> fn;
    };
    std::vector<Criterion> criteria{
        {1, "exact algebra round trips (1000 sections, syzygy residuals, < 30 s)", criterion1},
        {2, "fiber dimension oracles (< 5 s)", criterion2},
        {3, "short exact sequence identity at 100 random points per module (< 10 s)", criterion3},
        {4, "gl(2) isotropy structure constants at the origin", criterion4},
        {5, "flow and exponential accuracy, kappa identity", criterion5},
        {6, "1-parameter group law and derivative recovery", criterion6},
        {7, "differentiation closure and fd convergence", criterion7},
        {8, "graph equality on the seven-point grid with path replay", criterion8},
        {9, "subspace-diffeology counterexample (exact refusal)", criterion9},
        {10, "openness counterexample (< 5 s)", criterion10},
        {11, "Lie subalgebra integration (kernel, radius, torus)", criterion11},
        {12, "byte-identical JSON under a fixed seed", criterion12},
    };

    int failures = 0;
    for (auto& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << c.number << ". " << c.name;
        if (!detail.empty()) std::cout << " -- " << detail;
        std::cout << "\n";
        if (!ok) ++failures;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << "\n";
    return failures;
}
