#include "folia/flows.hpp"

#include <cmath>

#include "folia/errors.hpp"

namespace folia {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<long>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<long>(i)] = v[i];
    return out;
}

Eigen::VectorXd to_eigen(const RatVec& v) {
    Eigen::VectorXd out(static_cast<long>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<long>(i)] = v[i].get_d();
    return out;
}

std::vector<double> from_eigen(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::MatrixXd to_eigen(const RatMat& m) {
    if (m.empty()) return {};
    Eigen::MatrixXd out(static_cast<long>(m.size()), static_cast<long>(m[0].size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j)
            out(static_cast<long>(i), static_cast<long>(j)) = m[i][j].get_d();
    return out;
}

Eigen::VectorXd integrate_rk45(const OdeField& f, Eigen::VectorXd y, double t1,
                               const FlowOptions& opts,
                               std::vector<std::pair<double, Eigen::VectorXd>>* trace) {
    // Dormand-Prince 5(4) pair
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    if (t1 == 0.0) {
        if (trace) trace->emplace_back(0.0, y);
        return y;
    }
    const double dir = t1 > 0 ? 1.0 : -1.0;
    double t = 0.0;
    double h = dir * std::min(0.1, std::abs(t1));
    if (trace) trace->emplace_back(t, y);

    auto check = [&](const Eigen::VectorXd& v) {
        if (!v.allFinite() || v.norm() > opts.escape_radius)
            throw FlowEscapeError("flow escaped at t=" + std::to_string(t), t);
    };
    check(y);

    int steps = 0;
    while (dir * (t1 - t) > 0) {
        if (++steps > opts.max_steps)
            throw FlowEscapeError("flow exceeded max steps at t=" + std::to_string(t), t);
        if (dir * (t + h - t1) > 0) h = t1 - t;

        Eigen::VectorXd k1 = f(y);
        Eigen::VectorXd k2 = f(y + h * a21 * k1);
        Eigen::VectorXd k3 = f(y + h * (a31 * k1 + a32 * k2));
        Eigen::VectorXd k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        Eigen::VectorXd k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        Eigen::VectorXd k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Eigen::VectorXd ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        Eigen::VectorXd k7 = f(ynew);
        Eigen::VectorXd err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        bool finite = ynew.allFinite() && err.allFinite();
        double scale = opts.tol * (1.0 + std::max(y.norm(), finite ? ynew.norm() : y.norm()));
        double errnorm = finite ? err.norm() / scale : 2.0;
        if (finite && errnorm <= 1.0) {
            t += h;
            y = std::move(ynew);
            check(y);
            if (trace) trace->emplace_back(t, y);
        }
        double factor = finite ? 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2) : 0.2;
        factor = std::min(5.0, std::max(0.2, factor));
        h *= factor;
        if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
            throw FlowEscapeError("step size underflow at t=" + std::to_string(t), t);
    }
    return y;
}

Eigen::VectorXd flow(const std::vector<Poly>& field, const Eigen::VectorXd& x0, double time,
                     const FlowOptions& opts,
                     std::vector<std::pair<double, Eigen::VectorXd>>* trace) {
    const long n = x0.size();
    if (static_cast<long>(field.size()) != n) throw InputError("flow: field/point dimension mismatch");
    OdeField f = [&field, n](const Eigen::VectorXd& y) {
        std::vector<double> p(y.data(), y.data() + y.size());
        Eigen::VectorXd out(n);
        for (long i = 0; i < n; ++i) out[i] = field[static_cast<std::size_t>(i)].evaluate(p);
        return out;
    };
    return integrate_rk45(f, x0, time, opts, trace);
}

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a) {
    const long n = a.rows();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm

    auto pade = [&](const Eigen::MatrixXd& m, const std::vector<double>& b) {
        // odd coefficients feed U, even feed V
        std::vector<Eigen::MatrixXd> pows;  // m^2, m^4, ...
        Eigen::MatrixXd m2 = m * m;
        pows.push_back(m2);
        for (std::size_t p = 4; p + 1 < b.size(); p += 2) pows.push_back(pows.back() * m2);
        Eigen::MatrixXd u = b[1] * id;
        Eigen::MatrixXd v = b[0] * id;
        for (std::size_t p = 0; p < pows.size(); ++p) {
            if (2 * p + 3 < b.size()) u += b[2 * p + 3] * pows[p];
            if (2 * p + 2 < b.size()) v += b[2 * p + 2] * pows[p];
        }
        u = m * u;
        return Eigen::MatrixXd((v - u).partialPivLu().solve(v + u));
    };

    static const std::vector<double> b3 = {120, 60, 12, 1};
    static const std::vector<double> b5 = {30240, 15120, 3360, 420, 30, 1};
    static const std::vector<double> b7 = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
    static const std::vector<double> b9 = {17643225600, 8821612800, 2075673600, 302702400,
                                           30270240,    2162160,    110880,     3960,
                                           90,          1};
    static const std::vector<double> b13 = {64764752532480000.0,
                                            32382376266240000.0,
                                            7771770303897600.0,
                                            1187353796428800.0,
                                            129060195264000.0,
                                            10559470521600.0,
                                            670442572800.0,
                                            33522128640.0,
                                            1323241920.0,
                                            40840800.0,
                                            960960.0,
                                            16380.0,
                                            182.0,
                                            1.0};

    if (norm < 1.495585217958292e-2) return pade(a, b3);
    if (norm < 2.539398330063230e-1) return pade(a, b5);
    if (norm < 9.504178996162932e-1) return pade(a, b7);
    if (norm < 2.097847961257068e0) return pade(a, b9);

    const double theta13 = 5.371920351148152;
    int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
    Eigen::MatrixXd scaled = a / std::pow(2.0, squarings);
    Eigen::MatrixXd r = pade(scaled, b13);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

GroupoidElement GroupoidElement::pair(Eigen::VectorXd target, Eigen::VectorXd source) {
    GroupoidElement g;
    g.value_ = PairElem{std::move(target), std::move(source)};
    return g;
}

GroupoidElement GroupoidElement::group(Eigen::MatrixXd m) {
    GroupoidElement g;
    g.value_ = GroupElem{std::move(m)};
    return g;
}

GroupoidElement GroupoidElement::action(Eigen::MatrixXd m, Eigen::VectorXd base) {
    GroupoidElement g;
    g.value_ = ActionElem{std::move(m), std::move(base)};
    return g;
}

GroupoidElement GroupoidElement::unit_pair(const Eigen::VectorXd& x) { return pair(x, x); }

GroupoidElement GroupoidElement::unit_group(int dim) {
    return group(Eigen::MatrixXd::Identity(dim, dim));
}

GroupoidElement GroupoidElement::unit_action(int dim, const Eigen::VectorXd& x) {
    return action(Eigen::MatrixXd::Identity(dim, dim), x);
}

Eigen::VectorXd GroupoidElement::source() const {
    if (is_pair()) return as_pair().source;
    if (is_action()) return as_action().base;
    return Eigen::VectorXd();
}

Eigen::VectorXd GroupoidElement::target() const {
    if (is_pair()) return as_pair().target;
    if (is_action()) return as_action().matrix * as_action().base;
    return Eigen::VectorXd();
}

GroupoidElement GroupoidElement::compose(const GroupoidElement& right, double tol) const {
    if (value_.index() != right.value_.index())
        throw InputError("composing groupoid elements of different kinds");
    if (is_group()) return group(as_group().matrix * right.as_group().matrix);
    if ((source() - right.target()).norm() > tol)
        throw InputError("groupoid elements are not composable (source/target mismatch)");
    if (is_pair()) return pair(as_pair().target, right.as_pair().source);
    return action(as_action().matrix * right.as_action().matrix, right.as_action().base);
}

GroupoidElement GroupoidElement::inverse() const {
    if (is_pair()) return pair(as_pair().source, as_pair().target);
    if (is_group()) return group(as_group().matrix.inverse());
    const auto& a = as_action();
    Eigen::MatrixXd inv = a.matrix.inverse();
    return action(inv, a.matrix * a.base);
}

double GroupoidElement::distance(const GroupoidElement& other) const {
    if (value_.index() != other.value_.index()) return std::numeric_limits<double>::infinity();
    if (is_pair()) {
        const auto& a = as_pair();
        const auto& b = other.as_pair();
        return std::hypot((a.target - b.target).norm(), (a.source - b.source).norm());
    }
    if (is_group()) return (as_group().matrix - other.as_group().matrix).norm();
    const auto& a = as_action();
    const auto& b = other.as_action();
    return std::hypot((a.matrix - b.matrix).norm(), (a.base - b.base).norm());
}

bool GroupoidElement::approx_equal(const GroupoidElement& other, double tol) const {
    return distance(other) <= tol;
}

double GroupoidElement::unit_distance() const {
    if (is_pair()) return (as_pair().target - as_pair().source).norm();
    if (is_group()) {
        const auto& m = as_group().matrix;
        return (m - Eigen::MatrixXd::Identity(m.rows(), m.cols())).norm();
    }
    const auto& m = as_action().matrix;
    return (m - Eigen::MatrixXd::Identity(m.rows(), m.cols())).norm();
}

namespace {

// right-invariance reduces exp of an action section to the matrix ODE gdot = a(g x0) g
Eigen::MatrixXd action_exponential(const AmbientAlgebroid& amb,
                                   const std::vector<const FreeModuleElem*>& sections,
                                   const Eigen::VectorXd& lambda, const Eigen::VectorXd& x,
                                   double time, const FlowOptions& opts) {
    const int d = amb.matrix_dim();
    std::vector<Eigen::MatrixXd> mats;
    for (int a = 0; a < amb.rank(); ++a) mats.push_back(to_eigen(amb.realization()[a]));
    OdeField f = [&](const Eigen::VectorXd& flat) {
        Eigen::Map<const Eigen::MatrixXd> g(flat.data(), d, d);
        Eigen::VectorXd y = g * x;
        std::vector<double> yp(y.data(), y.data() + y.size());
        Eigen::MatrixXd a_of_y = Eigen::MatrixXd::Zero(d, d);
        for (int fr = 0; fr < amb.rank(); ++fr) {
            double coeff = 0.0;
            for (std::size_t i = 0; i < sections.size(); ++i)
                coeff += lambda[static_cast<long>(i)] * (*sections[i])[fr].evaluate(yp);
            if (coeff != 0.0) a_of_y += coeff * mats[fr];
        }
        Eigen::MatrixXd gdot = a_of_y * g;
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(gdot.data(), d * d));
    };
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd flat0 = Eigen::Map<const Eigen::VectorXd>(id.data(), d * d);
    Eigen::VectorXd flat1 = integrate_rk45(f, flat0, time, opts);
    return Eigen::Map<const Eigen::MatrixXd>(flat1.data(), d, d);
}

GroupoidElement exp_impl(const AmbientAlgebroid& amb,
                         const std::vector<const FreeModuleElem*>& sections,
                         const Eigen::VectorXd& lambda, const Eigen::VectorXd& x,
                         const FlowOptions& opts) {
    if (static_cast<std::size_t>(lambda.size()) != sections.size())
        throw InputError("coefficient count does not match the section count");
    switch (amb.kind()) {
        case AmbientKind::Tangent: {
            if (x.size() != amb.nvars()) throw InputError("base point dimension mismatch");
            const int n = amb.nvars();
            OdeField f = [&](const Eigen::VectorXd& y) {
                std::vector<double> p(y.data(), y.data() + y.size());
                Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
                for (std::size_t i = 0; i < sections.size(); ++i) {
                    if (lambda[static_cast<long>(i)] == 0.0) continue;
                    for (int c = 0; c < n; ++c)
                        out[c] += lambda[static_cast<long>(i)] * (*sections[i])[c].evaluate(p);
                }
                return out;
            };
            return GroupoidElement::pair(integrate_rk45(f, x, 1.0, opts), x);
        }
        case AmbientKind::LieAlgebra: {
            const int d = amb.matrix_dim();
            Eigen::MatrixXd combined = Eigen::MatrixXd::Zero(d, d);
            for (std::size_t i = 0; i < sections.size(); ++i) {
                for (int a = 0; a < amb.rank(); ++a) {
                    double c = (*sections[i])[a].constant_value().get_d();
                    if (c != 0.0)
                        combined += lambda[static_cast<long>(i)] * c * to_eigen(amb.realization()[a]);
                }
            }
            return GroupoidElement::group(matrix_exp(combined));
        }
        case AmbientKind::LinearAction: {
            if (x.size() != amb.nvars()) throw InputError("base point dimension mismatch");
            return GroupoidElement::action(action_exponential(amb, sections, lambda, x, 1.0, opts), x);
        }
    }
    throw InputError("unreachable ambient kind");
}

}  // namespace

GroupoidElement path_holonomy_exp(const SingularSubalgebroid& B, const Eigen::VectorXd& lambda,
                                  const Eigen::VectorXd& x, const FlowOptions& opts) {
    std::vector<const FreeModuleElem*> sections;
    for (const auto& g : B.generators()) sections.push_back(&g);
    return exp_impl(B.ambient(), sections, lambda, x, opts);
}

GroupoidElement path_holonomy_exp(const AmbientAlgebroid& ambient,
                                  const std::vector<FreeModuleElem>& sections,
                                  const Eigen::VectorXd& lambda, const Eigen::VectorXd& x,
                                  const FlowOptions& opts) {
    std::vector<const FreeModuleElem*> ptrs;
    for (const auto& s : sections) ptrs.push_back(&s);
    return exp_impl(ambient, ptrs, lambda, x, opts);
}

bool Box::contains(const Eigen::VectorXd& x) const {
    for (long i = 0; i < x.size(); ++i)
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
}

Eigen::VectorXd Box::sample(std::mt19937_64& rng) const {
    Eigen::VectorXd out(lo.size());
    for (long i = 0; i < lo.size(); ++i) {
        std::uniform_real_distribution<double> dist(lo[i], hi[i]);
        out[i] = dist(rng);
    }
    return out;
}

Box Box::cube(int dim, double radius) {
    Box b;
    b.lo = Eigen::VectorXd::Constant(dim, -radius);
    b.hi = Eigen::VectorXd::Constant(dim, radius);
    return b;
}

BisectionFamily::BisectionFamily(const SingularSubalgebroid& B, FreeModuleElem generator,
                                 Box domain, double lambda_radius, FlowOptions opts)
    : ambient_(B.ambient()),
      generator_(std::move(generator)),
      domain_(std::move(domain)),
      lambda_radius_(lambda_radius),
      opts_(opts) {
    anchor_field_ = ambient_.anchor_field(generator_);
}

GroupoidElement BisectionFamily::at(double lambda, const Eigen::VectorXd& x) const {
    const bool inside = ambient_.kind() == AmbientKind::LieAlgebra || domain_.contains(x);
    const double l = inside ? lambda : 0.0;  // identity outside the supporting box
    std::vector<const FreeModuleElem*> sections{&generator_};
    Eigen::VectorXd lvec(1);
    lvec[0] = l;
    switch (ambient_.kind()) {
        case AmbientKind::Tangent: {
            // time-l flow of the anchor field rather than time-1 flow of l*alpha: same curve
            Eigen::VectorXd y = flow(anchor_field_, x, l, opts_);
            return GroupoidElement::pair(y, x);
        }
        case AmbientKind::LieAlgebra:
        case AmbientKind::LinearAction:
            return exp_impl(ambient_, sections, lvec, x, opts_);
    }
    throw InputError("unreachable ambient kind");
}

Eigen::VectorXd BisectionFamily::target_point(double lambda, const Eigen::VectorXd& x) const {
    GroupoidElement g = at(lambda, x);
    Eigen::VectorXd t = g.target();
    return t.size() == 0 ? x : t;
}

std::optional<double> BisectionFamily::detect_period(const std::vector<Eigen::VectorXd>& samples,
                                                     double lambda_max, double coarse_step,
                                                     double tol) const {
    auto max_dev = [&](double lambda) {
        double dev = 0.0;
        for (const auto& x : samples)
            dev = std::max(dev, at(lambda, x).distance(at(0.0, x)));
        return dev;
    };
    double prev = max_dev(coarse_step);
    for (double l = 2 * coarse_step; l <= lambda_max; l += coarse_step) {
        double cur = max_dev(l);
        if (cur < prev && cur < 10 * coarse_step) {
            // bracket a local minimum and polish by ternary search
            double a = l - coarse_step, b = std::min(l + coarse_step, lambda_max);
            for (int it = 0; it < 200; ++it) {
                double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
                if (max_dev(m1) < max_dev(m2))
                    b = m2;
                else
                    a = m1;
            }
            double l_star = (a + b) / 2;
            if (max_dev(l_star) <= tol) return l_star;
        }
        prev = cur;
    }
    return std::nullopt;
}

BisectionFamily one_parameter_group(const SingularSubalgebroid& B, const FreeModuleElem& alpha,
                                    Box domain, double lambda_radius, FlowOptions opts) {
    if (!B.module().contains(alpha))
        throw InputError("one_parameter_group: the section is not a member of the module");
    return BisectionFamily(B, alpha, std::move(domain), lambda_radius, opts);
}

}  // namespace folia
