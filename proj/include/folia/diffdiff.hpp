#pragma once

#include "folia/holonomy.hpp"

namespace folia {

/// Family deviation exceeded tolerance; carries the h-refinement curve in the message.
struct NumericalInconsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A lambda-family of bisections of a path-holonomy chart, written as b_lambda = (Id, f_lambda)
/// with polynomial coefficients f_i(lambda, x) and f_0 = 0.
struct FamilySpec {
    std::vector<Poly> coefficients;  // in the variables (l, x_1..x_n), one per chart parameter
    double h = 1e-4;                 // central-difference step for the cross-check
};

struct DifferentiationResult {
    FreeModuleElem section;                    // sum_i (d/dl f_i)(0,.) alpha_i
    std::vector<Poly> coefficient_derivatives; // the g_i
    bool member = true;                        // certified against the module
    double max_deviation = 0.0;                // symbolic vs finite-difference of Phi o b_lambda
    std::vector<std::pair<double, double>> refinement;  // (h, deviation) when the check fails
};

/// d/dlambda at 0 of Phi o b_lambda: exact in the symbolic layer, cross-checked against central
/// differences of the chart evaluator. Throws NumericalInconsistencyError past the tolerance.
DifferentiationResult differentiate_family(const SingularSubalgebroid& B, const Chart& chart,
                                           const FamilySpec& spec, double tol = 1e-6,
                                           int nsamples = 10, unsigned seed = 7);

struct RecoveryReport {
    struct PerGenerator {
        int index;
        double max_deviation;
    };
    std::vector<PerGenerator> per_generator;
    double max_deviation = 0.0;
};

/// For every generator, builds its 1-parameter bisection group and checks that the derivative of
/// Phi o b_lambda recovers the generator on a sample grid.
RecoveryReport recover_generators(const SingularSubalgebroid& B, const Box& domain,
                                  const std::vector<Eigen::VectorXd>& grid, double fd_step = 1e-4,
                                  FlowOptions opts = {});

struct AlmostInjectivityReport {
    struct Solution {
        Eigen::VectorXd lambda;
        double deviation;
    };
    std::vector<Solution> identity_solutions;  // nonzero parameters mapping onto 1_M
    bool redundant_chart = false;
    double injectivity_radius = std::numeric_limits<double>::infinity();
    bool pass() const { return identity_solutions.empty() || redundant_chart; }
};

/// Samples constant-coefficient bisections of the chart near the identity slice and reports any
/// nonzero parameters whose image carries the identity bisection. Minimal charts must have none;
/// redundant charts document the equivalence collapse instead.
AlmostInjectivityReport almost_injectivity_probe(const SingularSubalgebroid& B, const Chart& chart,
                                                 const RatVec& base_point, double probe_radius = 1.0,
                                                 double scan_max = 8.0, double tol = 1e-6,
                                                 int base_samples = 6, unsigned seed = 11);

struct GroupLawReport {
    double max_deviation = 0.0;
    int samples = 0;
};

/// b_{lambda+mu} = b_lambda * b_mu on random triples, with the product evaluated through targets.
GroupLawReport group_law_probe(const BisectionFamily& family, int ntriples, unsigned seed,
                               double shrink = 0.5);

/// Endpoint displacement of b'_{-sqrt(l)} * b_{-sqrt(l)} * b'_{sqrt(l)} * b_{sqrt(l)} divided by l;
/// converges to the anchor of [alpha, alpha'] at x.
Eigen::VectorXd commutator_flow_estimate(const BisectionFamily& b, const BisectionFamily& bprime,
                                         const Eigen::VectorXd& x, double lambda);

}  // namespace folia
