#include "folia/diffdiff.hpp"

#include <cmath>
#include <sstream>

#include "folia/errors.hpp"
#include "folia/pointwise.hpp"

namespace folia {

namespace {

// derivative of Phi o b at lambda = 0, central differences; the comparison target is the anchor
// image for pair elements and the realization matrix for the matrix kinds
double fd_deviation(const AmbientAlgebroid& amb, const FreeModuleElem& section,
                    const std::function<GroupoidElement(double)>& at_lambda, double h,
                    const std::vector<double>& x) {
    GroupoidElement plus = at_lambda(h);
    GroupoidElement minus = at_lambda(-h);
    if (plus.is_pair()) {
        Eigen::VectorXd fd = (plus.as_pair().target - minus.as_pair().target) / (2 * h);
        std::vector<Poly> rho = amb.anchor_field(section);
        Eigen::VectorXd sym(fd.size());
        for (long i = 0; i < fd.size(); ++i) sym[i] = rho[static_cast<std::size_t>(i)].evaluate(x);
        return (fd - sym).norm();
    }
    const Eigen::MatrixXd mp = plus.is_group() ? plus.as_group().matrix : plus.as_action().matrix;
    const Eigen::MatrixXd mm = minus.is_group() ? minus.as_group().matrix : minus.as_action().matrix;
    Eigen::MatrixXd fd = (mp - mm) / (2 * h);
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(fd.rows(), fd.cols());
    for (int a = 0; a < amb.rank(); ++a) {
        double c = section[a].evaluate(x);
        if (c != 0.0) sym += c * to_eigen(amb.realization()[a]);
    }
    return (fd - sym).norm();
}

}  // namespace

DifferentiationResult differentiate_family(const SingularSubalgebroid& B, const Chart& chart,
                                           const FamilySpec& spec, double tol, int nsamples,
                                           unsigned seed) {
    if (!chart.path_holonomy) throw InputError("differentiate_family needs a path-holonomy chart");
    if (static_cast<int>(spec.coefficients.size()) != chart.k)
        throw InputError("coefficient count does not match the chart parameters");
    const int n = B.ambient().nvars();
    for (const auto& f : spec.coefficients) {
        if (f.nvars() != n + 1)
            throw InputError("family coefficients must be polynomials in (l, x_1..x_n)");
        if (!f.set_var(0, Rat(0)).is_zero())
            throw InputError("family does not satisfy f_0 = 0");
    }

    DifferentiationResult res;
    for (const auto& f : spec.coefficients) {
        Poly g = f.derivative(0).set_var(0, Rat(0)).drop_var(0);
        res.coefficient_derivatives.push_back(std::move(g));
    }
    FreeModuleElem section(B.ambient().rank(), n);
    for (int i = 0; i < chart.k; ++i)
        section += res.coefficient_derivatives[static_cast<std::size_t>(i)] *
                   B.generators()[chart.generator_indices[static_cast<std::size_t>(i)]];
    res.section = section;
    res.member = B.module().contains(section);  // the g_i themselves are a certificate

    // finite-difference cross-check of the chart evaluator at sampled base points
    std::mt19937_64 rng(seed);
    Box base = Box::cube(n, 0.5);
    if (chart.n > 0) {
        base.lo = chart.param_box.lo.tail(chart.n);
        base.hi = chart.param_box.hi.tail(chart.n);
        Eigen::VectorXd mid = 0.5 * (base.lo + base.hi);
        base.lo = mid + 0.5 * (base.lo - mid);
        base.hi = mid + 0.5 * (base.hi - mid);
    }
    auto deviation_at = [&](const Eigen::VectorXd& x, double h) {
        std::vector<double> xs = from_eigen(x);
        std::vector<double> lx(static_cast<std::size_t>(n) + 1);
        for (int c = 0; c < n; ++c) lx[static_cast<std::size_t>(c) + 1] = xs[static_cast<std::size_t>(c)];
        auto at_lambda = [&](double l) {
            lx[0] = l;
            Eigen::VectorXd lam(chart.k);
            for (int i = 0; i < chart.k; ++i)
                lam[i] = spec.coefficients[static_cast<std::size_t>(i)].evaluate(lx);
            return chart.at(lam, x);
        };
        return fd_deviation(B.ambient(), section, at_lambda, h, xs);
    };

    std::vector<Eigen::VectorXd> samples;
    for (int s = 0; s < nsamples; ++s)
        samples.push_back(n > 0 ? base.sample(rng) : Eigen::VectorXd(0));
    for (const auto& x : samples)
        res.max_deviation = std::max(res.max_deviation, deviation_at(x, spec.h));

    if (res.max_deviation > tol) {
        for (int i = 0; i < 5; ++i) {
            double h = spec.h / std::pow(2.0, i);
            double dev = 0.0;
            for (const auto& x : samples) dev = std::max(dev, deviation_at(x, h));
            res.refinement.emplace_back(h, dev);
        }
        std::ostringstream os;
        os << "family derivative deviates from the chart evaluator: max deviation "
           << res.max_deviation << " > " << tol << "; refinement:";
        for (auto& [h, d] : res.refinement) os << " (" << h << ", " << d << ")";
        throw NumericalInconsistencyError(os.str());
    }
    return res;
}

RecoveryReport recover_generators(const SingularSubalgebroid& B, const Box& domain,
                                  const std::vector<Eigen::VectorXd>& grid, double fd_step,
                                  FlowOptions opts) {
    B.check_involutive();
    RecoveryReport rep;
    for (int gi = 0; gi < B.generator_count(); ++gi) {
        const FreeModuleElem& alpha = B.generators()[static_cast<std::size_t>(gi)];
        if (alpha.is_zero()) {
            rep.per_generator.push_back({gi, 0.0});
            continue;
        }
        BisectionFamily fam = one_parameter_group(B, alpha, domain, 1.0, opts);
        double dev = 0.0;
        for (const auto& x : grid) {
            auto at_lambda = [&](double l) { return fam.at(l, x); };
            dev = std::max(dev, fd_deviation(B.ambient(), alpha, at_lambda, fd_step, from_eigen(x)));
        }
        rep.per_generator.push_back({gi, dev});
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    return rep;
}

namespace {

// distance of the constant-coefficient bisection to the identity bisection of G, over samples
double identity_deviation(const Chart& chart, const Eigen::VectorXd& lambda,
                          const std::vector<Eigen::VectorXd>& samples) {
    double dev = 0.0;
    for (const auto& x : samples) dev = std::max(dev, chart.at(lambda, x).unit_distance());
    return dev;
}

}  // namespace

AlmostInjectivityReport almost_injectivity_probe(const SingularSubalgebroid& B, const Chart& chart,
                                                 const RatVec& base_point, double probe_radius,
                                                 double scan_max, double tol, int base_samples,
                                                 unsigned seed) {
    if (!chart.source_parameterized()) throw InputError("probe needs a source-parameterized chart");
    AlmostInjectivityReport rep;
    rep.redundant_chart = chart.k > fiber_dimension(B, base_point);

    std::mt19937_64 rng(seed);
    std::vector<Eigen::VectorXd> samples;
    Eigen::VectorXd center = to_eigen(base_point);
    samples.push_back(center);
    Box ball = Box::cube(chart.n, 0.4);
    for (int s = 1; s < base_samples; ++s) {
        Eigen::VectorXd x = chart.n > 0 ? Eigen::VectorXd(center + ball.sample(rng)) : center;
        samples.push_back(x);
    }

    // grid scan over constant bisection coefficients, with a ray polish for near-identity hits
    const int steps = 4;
    std::vector<Eigen::VectorXd> grid;
    std::function<void(Eigen::VectorXd&, int)> build = [&](Eigen::VectorXd& cur, int axis) {
        if (axis == chart.k) {
            if (cur.norm() > 1e-12) grid.push_back(cur);
            return;
        }
        for (int s = -steps; s <= steps; ++s) {
            cur[axis] = probe_radius * s / steps;
            build(cur, axis + 1);
        }
    };
    Eigen::VectorXd cur = Eigen::VectorXd::Zero(chart.k);
    build(cur, 0);

    for (const auto& lambda : grid) {
        double dev = identity_deviation(chart, lambda, samples);
        if (dev <= tol) {
            rep.identity_solutions.push_back({lambda, dev});
        } else if (dev < 0.05) {
            double a = 0.8, b = 1.2;
            for (int it = 0; it < 120; ++it) {
                double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
                if (identity_deviation(chart, m1 * lambda, samples) <
                    identity_deviation(chart, m2 * lambda, samples))
                    b = m2;
                else
                    a = m1;
            }
            double s = 0.5 * (a + b);
            double polished = identity_deviation(chart, s * lambda, samples);
            if (polished <= tol) rep.identity_solutions.push_back({s * lambda, polished});
        }
    }

    // injectivity radius from a wide directional scan along the chart axes
    for (int axis = 0; axis < chart.k; ++axis) {
        auto dist = [&](double l) {
            Eigen::VectorXd lam = Eigen::VectorXd::Zero(chart.k);
            lam[axis] = l;
            return identity_deviation(chart, lam, samples);
        };
        double step = 1e-2;
        double prev2 = dist(step), prev = dist(2 * step);
        for (double l = 3 * step; l <= scan_max; l += step) {
            double c = dist(l);
            if (prev < prev2 && prev <= c) {
                double a = l - 2 * step, b = l;
                for (int it = 0; it < 140; ++it) {
                    double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
                    if (dist(m1) < dist(m2))
                        b = m2;
                    else
                        a = m1;
                }
                double l_star = 0.5 * (a + b);
                if (dist(l_star) <= tol) {
                    rep.injectivity_radius = std::min(rep.injectivity_radius, l_star / 2.0);
                    break;
                }
            }
            prev2 = prev;
            prev = c;
        }
    }
    return rep;
}

GroupLawReport group_law_probe(const BisectionFamily& family, int ntriples, unsigned seed,
                               double shrink) {
    std::mt19937_64 rng(seed);
    GroupLawReport rep;
    const double r = family.lambda_radius() * shrink;
    std::uniform_real_distribution<double> lam(-r / 2, r / 2);
    Box domain = family.domain();
    Eigen::VectorXd mid = 0.5 * (domain.lo + domain.hi);
    Box inner = domain;
    inner.lo = mid + shrink * (domain.lo - mid);
    inner.hi = mid + shrink * (domain.hi - mid);
    const bool point_base = family.ambient().kind() == AmbientKind::LieAlgebra;
    for (int s = 0; s < ntriples; ++s) {
        double l = lam(rng), m = lam(rng);
        Eigen::VectorXd x = point_base ? Eigen::VectorXd(0) : inner.sample(rng);
        GroupoidElement direct = family.at(l + m, x);
        GroupoidElement bm = family.at(m, x);
        Eigen::VectorXd y = family.target_point(m, x);
        GroupoidElement bl = family.at(l, y);
        GroupoidElement product = bl.compose(bm, 1e-5);
        rep.max_deviation = std::max(rep.max_deviation, direct.distance(product));
        ++rep.samples;
    }
    return rep;
}

Eigen::VectorXd commutator_flow_estimate(const BisectionFamily& b, const BisectionFamily& bprime,
                                         const Eigen::VectorXd& x, double lambda) {
    const double h = std::sqrt(lambda);
    Eigen::VectorXd x1 = b.target_point(h, x);
    Eigen::VectorXd x2 = bprime.target_point(h, x1);
    Eigen::VectorXd x3 = b.target_point(-h, x2);
    Eigen::VectorXd x4 = bprime.target_point(-h, x3);
    return (x4 - x) / lambda;
}

}  // namespace folia
