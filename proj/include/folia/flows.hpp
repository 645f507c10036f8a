#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <random>
#include <variant>

#include "folia/geometry.hpp"

namespace folia {

struct FlowOptions {
    double tol = 1e-9;            // RK45 local error tolerance
    double escape_radius = 1e6;   // blow-ups fail loudly past this radius
    int max_steps = 1000000;
};

Eigen::VectorXd to_eigen(const std::vector<double>& v);
Eigen::VectorXd to_eigen(const RatVec& v);
std::vector<double> from_eigen(const Eigen::VectorXd& v);
Eigen::MatrixXd to_eigen(const RatMat& m);

using OdeField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Adaptive Dormand-Prince 5(4) from time 0 to t1. Throws FlowEscapeError on blow-up.
Eigen::VectorXd integrate_rk45(const OdeField& f, Eigen::VectorXd y0, double t1,
                               const FlowOptions& opts = {},
                               std::vector<std::pair<double, Eigen::VectorXd>>* trace = nullptr);

/// Time-t flow of a polynomial vector field.
Eigen::VectorXd flow(const std::vector<Poly>& field, const Eigen::VectorXd& x0, double time,
                     const FlowOptions& opts = {},
                     std::vector<std::pair<double, Eigen::VectorXd>>* trace = nullptr);

/// Scaling-and-squaring Pade exponential.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a);

struct PairElem {
    Eigen::VectorXd target, source;
};
struct GroupElem {
    Eigen::MatrixXd matrix;
};
struct ActionElem {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd base;
};

/// An element of the integrating groupoid: pair groupoid for tangent ambients, matrix group over
/// a point, transformation groupoid for linear actions.
class GroupoidElement {
public:
    GroupoidElement() = default;
    static GroupoidElement pair(Eigen::VectorXd target, Eigen::VectorXd source);
    static GroupoidElement group(Eigen::MatrixXd m);
    static GroupoidElement action(Eigen::MatrixXd m, Eigen::VectorXd base);
    static GroupoidElement unit_pair(const Eigen::VectorXd& x);
    static GroupoidElement unit_group(int dim);
    static GroupoidElement unit_action(int dim, const Eigen::VectorXd& x);

    bool is_pair() const { return std::holds_alternative<PairElem>(value_); }
    bool is_group() const { return std::holds_alternative<GroupElem>(value_); }
    bool is_action() const { return std::holds_alternative<ActionElem>(value_); }
    const PairElem& as_pair() const { return std::get<PairElem>(value_); }
    const GroupElem& as_group() const { return std::get<GroupElem>(value_); }
    const ActionElem& as_action() const { return std::get<ActionElem>(value_); }

    Eigen::VectorXd source() const;  // empty for group elements
    Eigen::VectorXd target() const;

    GroupoidElement compose(const GroupoidElement& right, double tol = 1e-6) const;
    GroupoidElement inverse() const;
    double distance(const GroupoidElement& other) const;
    bool approx_equal(const GroupoidElement& other, double tol) const;
    double unit_distance() const;  // distance to the unit at its own source
    bool is_unit(double tol) const { return unit_distance() <= tol; }

private:
    std::variant<PairElem, GroupElem, ActionElem> value_;
};

/// exp_x(sum lambda_i alpha_i): the path-holonomy exponential into the integrating groupoid.
GroupoidElement path_holonomy_exp(const SingularSubalgebroid& B, const Eigen::VectorXd& lambda,
                                  const Eigen::VectorXd& x, const FlowOptions& opts = {});

/// Same map for an explicit generator subset.
GroupoidElement path_holonomy_exp(const AmbientAlgebroid& ambient,
                                  const std::vector<FreeModuleElem>& sections,
                                  const Eigen::VectorXd& lambda, const Eigen::VectorXd& x,
                                  const FlowOptions& opts = {});

struct Box {
    Eigen::VectorXd lo, hi;
    bool contains(const Eigen::VectorXd& x) const;
    Eigen::VectorXd sample(std::mt19937_64& rng) const;
    static Box cube(int dim, double radius);
};

/// The 1-parameter family of bisections b_lambda(x) = exp_x(lambda alpha), identity outside the
/// box. b_0 is the identity and the group law holds along the flow.
class BisectionFamily {
public:
    BisectionFamily(const SingularSubalgebroid& B, FreeModuleElem generator, Box domain,
                    double lambda_radius, FlowOptions opts = {});

    GroupoidElement at(double lambda, const Eigen::VectorXd& x) const;
    /// target point of b_lambda(x); for matrix-group families this is x itself (point base).
    Eigen::VectorXd target_point(double lambda, const Eigen::VectorXd& x) const;

    const Box& domain() const { return domain_; }
    double lambda_radius() const { return lambda_radius_; }
    const FreeModuleElem& generator() const { return generator_; }
    const AmbientAlgebroid& ambient() const { return ambient_; }
    const FlowOptions& flow_options() const { return opts_; }

    /// Smallest lambda in (0, lambda_max] with b_lambda = b_0 on the sample points, if any.
    std::optional<double> detect_period(const std::vector<Eigen::VectorXd>& samples,
                                        double lambda_max, double coarse_step, double tol) const;

private:
    AmbientAlgebroid ambient_;
    FreeModuleElem generator_;
    std::vector<Poly> anchor_field_;
    Box domain_;
    double lambda_radius_;
    FlowOptions opts_;
};

/// Membership-checked construction (Prop on 1-parameter groups of bisections).
BisectionFamily one_parameter_group(const SingularSubalgebroid& B, const FreeModuleElem& alpha,
                                    Box domain, double lambda_radius, FlowOptions opts = {});

}  // namespace folia
