#include "folia/graph.hpp"

#include <cmath>
#include <deque>
#include <map>

#include "folia/errors.hpp"
#include "folia/parallel.hpp"

namespace folia {

namespace {

// polynomial vector field with double coefficients; the BFS evaluates fields millions of times
struct CompiledField {
    struct Term {
        double coeff;
        Exponents exps;
    };
    std::vector<std::vector<Term>> components;

    static CompiledField from(const std::vector<Poly>& field) {
        CompiledField out;
        out.components.resize(field.size());
        for (std::size_t c = 0; c < field.size(); ++c)
            for (const auto& [e, q] : field[c].terms())
                out.components[c].push_back({q.get_d(), e});
        return out;
    }

    void eval(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
        for (std::size_t c = 0; c < components.size(); ++c) {
            double acc = 0.0;
            for (const auto& t : components[c]) {
                double v = t.coeff;
                for (std::size_t i = 0; i < t.exps.size(); ++i)
                    for (unsigned p = 0; p < t.exps[i]; ++p) v *= x[static_cast<long>(i)];
                acc += v;
            }
            out[static_cast<long>(c)] = acc;
        }
    }

    double max_speed(const Eigen::VectorXd& x) const {
        Eigen::VectorXd tmp(static_cast<long>(components.size()));
        eval(x, tmp);
        return tmp.norm();
    }
};

// points bucketed into cells of the visited radius; a point is new when no stored point within
// the radius exists in the neighboring cells
class VisitedBalls {
public:
    VisitedBalls(double radius, int dim) : radius_(radius), dim_(dim) {}

    bool insert_if_new(const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& storage) {
        std::vector<long> cell = cell_of(x);
        std::vector<long> probe = cell;
        if (!scan(probe, 0, x, storage)) return false;
        cells_[cell].push_back(storage.size());
        return true;
    }

private:
    std::vector<long> cell_of(const Eigen::VectorXd& x) const {
        std::vector<long> c(dim_);
        for (int i = 0; i < dim_; ++i) c[i] = static_cast<long>(std::floor(x[i] / radius_));
        return c;
    }

    bool scan(std::vector<long>& probe, int axis, const Eigen::VectorXd& x,
              const std::vector<Eigen::VectorXd>& storage) const {
        if (axis == dim_) {
            auto it = cells_.find(probe);
            if (it == cells_.end()) return true;
            for (std::size_t idx : it->second)
                if ((storage[idx] - x).norm() < radius_) return false;
            return true;
        }
        long base = probe[axis];
        for (long d = -1; d <= 1; ++d) {
            probe[axis] = base + d;
            if (!scan(probe, axis + 1, x, storage)) {
                probe[axis] = base;
                return false;
            }
        }
        probe[axis] = base;
        return true;
    }

    double radius_;
    int dim_;
    std::map<std::vector<long>, std::vector<std::size_t>> cells_;
};

std::vector<CompiledField> anchor_fields(const SingularSubalgebroid& B) {
    std::vector<CompiledField> out;
    for (const auto& g : B.generators())
        out.push_back(CompiledField::from(B.ambient().anchor_field(g)));
    return out;
}

Eigen::VectorXd integrate_compiled(const CompiledField& f, const Eigen::VectorXd& x0,
                                   double duration, const FlowOptions& opts) {
    const long n = x0.size();
    OdeField fn = [&f, n](const Eigen::VectorXd& y) {
        Eigen::VectorXd out(n);
        f.eval(y, out);
        return out;
    };
    return integrate_rk45(fn, x0, duration, opts);
}

}  // namespace

SameLeafResult same_leaf(const SingularSubalgebroid& B, const Eigen::VectorXd& p,
                         const Eigen::VectorXd& q, const SameLeafOptions& opts) {
    const int n = B.ambient().nvars();
    if (p.size() != n || q.size() != n) throw InputError("same_leaf: point dimension mismatch");

    SameLeafResult res;
    res.path.start = p;
    if ((p - q).norm() <= opts.accept_radius) {
        res.yes = true;
        res.path.end = p;
        res.path.deviation = (p - q).norm();
        return res;
    }

    std::vector<CompiledField> fields = anchor_fields(B);
    std::vector<double> durations;
    for (int j = 0; j <= opts.max_duration_exp; ++j) durations.push_back(std::pow(2.0, -j));

    // exploration window: paths rarely need excursions far beyond the endpoints
    const double search_radius = 4.0 * std::max({p.norm(), q.norm(), 1.0});

    struct Node {
        Eigen::VectorXd x;
        std::size_t parent;
        ControlSegment via;
    };
    std::vector<Node> nodes;
    std::vector<Eigen::VectorXd> points;
    VisitedBalls visited(opts.visited_radius, n);
    std::deque<std::size_t> frontier;

    nodes.push_back({p, SIZE_MAX, {-1, 0.0}});
    visited.insert_if_new(p, points);
    points.push_back(p);
    frontier.push_back(0);

    auto build_path = [&](std::size_t leaf_idx) {
        LeafPath path;
        path.start = p;
        path.end = nodes[leaf_idx].x;
        path.deviation = (path.end - q).norm();
        std::size_t cur = leaf_idx;
        while (nodes[cur].parent != SIZE_MAX) {
            path.segments.push_back(nodes[cur].via);
            cur = nodes[cur].parent;
        }
        std::reverse(path.segments.begin(), path.segments.end());
        return path;
    };

    bool escape_seen = false;
    while (!frontier.empty() && res.expanded < opts.budget) {
        std::size_t cur = frontier.front();
        frontier.pop_front();
        ++res.expanded;
        Eigen::VectorXd x = nodes[cur].x;
        for (std::size_t fi = 0; fi < fields.size(); ++fi) {
            double speed = fields[fi].max_speed(x);
            for (double dur : durations) {
                if (speed * dur < 0.5 * opts.visited_radius) break;  // child stays in this ball
                for (double sign : {1.0, -1.0}) {
                    Eigen::VectorXd y;
                    try {
                        y = integrate_compiled(fields[fi], x, sign * dur, opts.flow);
                    } catch (const FlowEscapeError&) {
                        escape_seen = true;
                        continue;
                    }
                    if (y.norm() > search_radius) continue;
                    if (!visited.insert_if_new(y, points)) continue;
                    nodes.push_back({y, cur, {static_cast<int>(fi), sign * dur}});
                    points.push_back(y);
                    if ((y - q).norm() <= opts.accept_radius) {
                        res.yes = true;
                        res.path = build_path(nodes.size() - 1);
                        return res;
                    }
                    frontier.push_back(nodes.size() - 1);
                }
            }
        }
    }
    res.diagnostic = frontier.empty() ? "frontier exhausted" : "budget exhausted";
    if (escape_seen) res.diagnostic += " (some flows escaped)";
    return res;
}

Eigen::VectorXd replay_path(const SingularSubalgebroid& B, const LeafPath& path,
                            const FlowOptions& opts) {
    std::vector<CompiledField> fields = anchor_fields(B);
    Eigen::VectorXd x = path.start;
    for (const auto& seg : path.segments)
        x = integrate_compiled(fields[static_cast<std::size_t>(seg.generator)], x, seg.duration,
                               opts);
    return x;
}

GraphCompareReport graph_equal_sample(const SingularSubalgebroid& B1,
                                      const SingularSubalgebroid& B2,
                                      const std::vector<Eigen::VectorXd>& grid,
                                      const SameLeafOptions& opts) {
    if (B1.ambient().nvars() != B2.ambient().nvars())
        throw InputError("graph_equal_sample: base dimension mismatch");
    GraphCompareReport rep;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j)
            if (i != j) pairs.emplace_back(i, j);
    rep.entries.resize(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t idx) {
        auto [i, j] = pairs[idx];
        GraphCompareReport::Entry e;
        e.p = grid[i];
        e.q = grid[j];
        e.yes1 = same_leaf(B1, e.p, e.q, opts).yes;
        e.yes2 = same_leaf(B2, e.p, e.q, opts).yes;
        rep.entries[idx] = std::move(e);
    });
    for (const auto& e : rep.entries) {
        if (e.disagree())
            ++rep.disagreements;
        else if (e.yes1)
            ++rep.agreements;
        else
            ++rep.both_unknown;
    }
    return rep;
}

std::vector<DiffeologyDifferentiationResult> subspace_diffeology_differentiation(
    const SingularSubalgebroid& B, const std::vector<PolyFamily>& families,
    const std::vector<Eigen::VectorXd>& validation_samples, const SameLeafOptions& opts) {
    const int n = B.ambient().nvars();
    const SingularSubalgebroid foliation =
        B.ambient().kind() == AmbientKind::Tangent ? B : induced_foliation(B);

    std::vector<DiffeologyDifferentiationResult> out;
    for (const auto& fam : families) {
        if (static_cast<int>(fam.components.size()) != n)
            throw InputError("family component count must match the base dimension");
        DiffeologyDifferentiationResult res;
        // c_0 = id, exactly
        for (int c = 0; c < n; ++c) {
            Poly at0 = fam.components[c].set_var(0, Rat(0)).drop_var(0);
            if (at0 != Poly::variable(n, c))
                throw InputError("family does not restrict to the identity at lambda = 0");
        }
        for (int c = 0; c < n; ++c)
            res.derivative.push_back(fam.components[c].derivative(0).set_var(0, Rat(0)).drop_var(0));

        // sampled validation that the family preserves the leaf relation
        for (const auto& x : validation_samples) {
            for (double l : {0.25, 0.5}) {
                std::vector<double> lx(static_cast<std::size_t>(n) + 1);
                lx[0] = l;
                for (int c = 0; c < n; ++c) lx[static_cast<std::size_t>(c) + 1] = x[c];
                Eigen::VectorXd y(n);
                for (int c = 0; c < n; ++c) y[c] = fam.components[c].evaluate(lx);
                SameLeafResult sl = same_leaf(foliation, x, y, opts);
                if (!sl.yes) {
                    res.leaf_preserving = false;
                    res.detail = "same_leaf returned Unknown at a validation sample";
                }
            }
        }

        FreeModuleElem section(res.derivative);
        res.member = foliation.module().contains(section);
        out.push_back(std::move(res));
    }
    return out;
}

namespace {

double angle_mod(double theta) {
    double t = std::fmod(theta, 2 * M_PI);
    if (t < 0) t += 2 * M_PI;
    return t;  // in [0, 2pi)
}

bool angle_in_arc(double theta, double lo, double hi) {
    // the arc (lo, hi) on the circle, angles taken mod 2pi
    double t = angle_mod(theta);
    double a = angle_mod(lo), b = angle_mod(hi);
    if (hi - lo >= 2 * M_PI) return true;
    if (a <= b) return t > a && t < b;
    return t > a || t < b;
}

Eigen::Matrix2d rotation(double theta) {
    Eigen::Matrix2d m;
    m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return m;
}

// computed membership of (theta, x) in Phi^{-1}(Phi(arc x M)): dense scan over the arc with a
// local polish, compared against the closed-form prediction by the caller
bool saturation_member_computed(double theta, const Eigen::Vector2d& x, double lo, double hi,
                                double tol) {
    Eigen::Vector2d image = rotation(theta) * x;
    double best = std::numeric_limits<double>::infinity();
    const int steps = 2000;
    double best_tp = lo;
    for (int s = 1; s < steps; ++s) {
        double tp = lo + (hi - lo) * s / steps;
        double d = (rotation(tp) * x - image).norm();
        if (d < best) {
            best = d;
            best_tp = tp;
        }
    }
    // golden-section polish around the best grid angle
    double a = std::max(lo, best_tp - (hi - lo) / steps);
    double b = std::min(hi, best_tp + (hi - lo) / steps);
    for (int it = 0; it < 120; ++it) {
        double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
        if ((rotation(m1) * x - image).norm() < (rotation(m2) * x - image).norm())
            b = m2;
        else
            a = m1;
    }
    best = std::min(best, (rotation(0.5 * (a + b)) * x - image).norm());
    return best <= tol;
}

}  // namespace

OpennessReport openness_counterexample(double arc_lo, double arc_hi,
                                       const std::vector<Eigen::Vector2d>& base_samples,
                                       const std::vector<double>& witness_angles,
                                       const std::vector<double>& witness_eps, double tol) {
    if (!(arc_lo < 0 && arc_hi > 0))
        throw InputError("the control arc must be an open neighborhood of the identity angle 0");
    OpennessReport rep;
    if (arc_hi - arc_lo >= 2 * M_PI) {
        rep.degenerate = true;
        rep.detail = "the control arc is the full circle: the saturation is everything";
        return rep;
    }

    // saturation identity on the sample set
    std::vector<double> thetas;
    for (int i = 0; i <= 16; ++i) thetas.push_back(-M_PI + 2 * M_PI * i / 16.0);
    for (double w : witness_angles) thetas.push_back(w);
    auto near_boundary = [&](double theta) {
        for (double b : {arc_lo, arc_hi}) {
            double d = std::abs(angle_mod(theta) - angle_mod(b));
            if (std::min(d, 2 * M_PI - d) < 1e-3) return true;
        }
        return false;
    };
    for (const auto& x : base_samples) {
        for (double theta : thetas) {
            if (x.norm() > tol && near_boundary(theta)) continue;  // open-set boundary: skip
            bool computed = x.norm() <= tol
                                ? true
                                : saturation_member_computed(theta, x, arc_lo, arc_hi, 1e-6);
            bool predicted = x.norm() <= tol || angle_in_arc(theta, arc_lo, arc_hi);
            ++rep.samples_checked;
            if (computed != predicted) {
                rep.saturation_matches = false;
                rep.detail = "saturation sample disagrees with the predicted set at theta=" +
                             std::to_string(theta);
            }
        }
    }

    // the witness: (g, 0) lies inside but every sampled neighborhood contains (g, (eps,0)) outside
    for (double g : witness_angles) {
        if (angle_in_arc(g, arc_lo, arc_hi)) {
            rep.witness_holds = false;
            rep.detail = "witness angle lies in the control arc";
            continue;
        }
        Eigen::Vector2d origin = Eigen::Vector2d::Zero();
        bool inside = origin.norm() <= tol;  // (g, 0): the action fixes the origin
        if (!inside) rep.witness_holds = false;
        for (double eps : witness_eps) {
            Eigen::Vector2d x(eps, 0.0);
            ++rep.samples_checked;
            if (saturation_member_computed(g, x, arc_lo, arc_hi, 1e-6)) {
                rep.witness_holds = false;
                rep.detail = "witness point (g,(eps,0)) unexpectedly in the saturation, eps=" +
                             std::to_string(eps);
            }
        }
    }
    if (rep.pass() && rep.detail.empty())
        rep.detail = "saturation identity and witness family verified on all samples";
    return rep;
}

}  // namespace folia
