#pragma once

#include "folia/flows.hpp"

namespace folia {

/// A bisubmersion presentation: a parameter box with an evaluator into the integrating groupoid.
/// Path-holonomy charts are parameterized as (lambda, x) with source x; inverses and compositions
/// keep their own parameterizations and read source/target off the evaluated element.
struct Chart {
    int param_dim = 0;
    Box param_box;
    std::function<GroupoidElement(const Eigen::VectorXd&)> eval;
    std::string provenance;

    /// Source-parameterized structure: params = (lambda[0..k), x[0..n)). k < 0 otherwise.
    int k = -1;
    int n = 0;
    bool path_holonomy = false;  // the kappa inversion formula applies
    std::vector<int> generator_indices;

    bool source_parameterized() const { return k >= 0; }
    GroupoidElement at(const Eigen::VectorXd& lambda, const Eigen::VectorXd& x) const;
    Eigen::VectorXd source_map(const Eigen::VectorXd& params) const;
    Eigen::VectorXd target_map(const Eigen::VectorXd& params) const;
    /// kappa(lambda, x) = (-lambda, t_U(lambda, x)); path-holonomy charts only.
    Eigen::VectorXd kappa(const Eigen::VectorXd& params) const;
};

/// Minimal path-holonomy chart at a rational base point: the generator subset whose classes form
/// a basis of the fiber there. Set minimal=false to keep every generator.
Chart path_holonomy_chart(const SingularSubalgebroid& B, const RatVec& base_point,
                          double lambda_radius = 1.0, double base_radius = 2.0,
                          bool minimal = true, FlowOptions opts = {});

Chart invert_chart(const Chart& U);

/// Composition along matched samples: parameters (lambda1, params2), the left factor must be
/// source-parameterized. Throws InputError when no composable samples exist.
Chart compose_charts(const Chart& U1, const Chart& U2, double tol = 1e-6);

struct Atlas {
    std::vector<Chart> charts;
    int depth = 0;
};

/// Minimal charts at the sample points, closed under inverse and composition up to the depth bound.
Atlas path_holonomy_atlas(const SingularSubalgebroid& B, const std::vector<RatVec>& base_points,
                          int depth_bound = 3, double lambda_radius = 1.0, double base_radius = 2.0,
                          FlowOptions opts = {});

struct KappaCheck {
    double max_dev = 0.0;
    int samples = 0;
};

/// Inversion identity of path-holonomy charts: evaluator(kappa(u)) = evaluator(u)^{-1} on
/// random samples.
KappaCheck check_kappa(const Chart& U, int nsamples, unsigned seed, double scale = 0.5);

/// Source-fiber dimension of a minimal chart presentation at x, cross-checked against the
/// pointwise fiber dimension. Throws on mismatch (after retrying with pruned generators).
int leafwise_fiber_dim(const SingularSubalgebroid& B, const RatVec& x);

struct KernelScanOptions {
    double lambda_max = 20.0;
    double step = 1e-3;
    double tol = 1e-9;       // polished distance for a kernel hit
    double near_tol = 0.1;   // recurrence threshold for the closure heuristic
};

struct SubgroupReport {
    std::vector<Eigen::VectorXd> basis;  // coefficients in the ambient frame
    double injectivity_radius = std::numeric_limits<double>::infinity();
    struct KernelHit {
        int direction;
        double lambda;
        double distance;
    };
    std::vector<KernelHit> kernel;
    bool kernel_found = false;
    double min_recurrence = std::numeric_limits<double>::infinity();
    double min_recurrence_lambda = 0.0;
    std::string closure_flag;
};

/// Integrates a matrix Lie subalgebra by sampling exponentials: kernel lattice of the
/// 1-parameter directions, injectivity radius near the identity, closure heuristic.
/// The basis must be bracket-closed within the ambient structure constants.
SubgroupReport integrate_lie_subalgebra(const AmbientAlgebroid& g,
                                        const std::vector<Eigen::VectorXd>& basis,
                                        const KernelScanOptions& opts = {});

struct TransformationHolonomy {
    Chart action_chart;  // params (theta, x), evaluates Phi(theta, x) = (exp(theta.A) x, x)
    Atlas atlas;
    /// exp coordinates -> the group element of the transformation groupoid
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> group_element;
    struct Probe {
        /// chart parameters theta != 0 that realize the identity matrix (kernel of the chart map)
        std::vector<SubgroupReport::KernelHit> chart_kernel;
        /// true when no sampled bisection through a non-identity group element lands in 1_M
        bool ideal_trivial = true;
        std::string detail;
    } probe;
};

/// Holonomy presentation of a module generated by the full action frame, over the transformation
/// groupoid. Refuses (with a membership witness) when the module is not the full action module.
TransformationHolonomy transformation_holonomy(const SingularSubalgebroid& B,
                                               const std::vector<RatVec>& base_samples,
                                               const KernelScanOptions& opts = {});

}  // namespace folia
