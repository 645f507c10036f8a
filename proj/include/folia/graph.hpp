#pragma once

#include "folia/flows.hpp"

namespace folia {

struct ControlSegment {
    int generator;    // index into the induced foliation's generators
    double duration;  // signed
};

struct LeafPath {
    std::vector<ControlSegment> segments;
    Eigen::VectorXd start;
    Eigen::VectorXd end;       // point actually reached
    double deviation = 0.0;    // |end - requested target|
};

struct SameLeafOptions {
    std::size_t budget = 100000;   // node expansions
    double visited_radius = 1e-3;  // dedup ball
    double accept_radius = 5e-2;   // goal ball (the dyadic control grid bounds closest approach)
    int max_duration_exp = 6;      // durations 2^{-j}, j = 0..max
    FlowOptions flow;
};

struct SameLeafResult {
    bool yes = false;  // Unknown otherwise; "No" is never reported
    LeafPath path;
    std::size_t expanded = 0;
    std::string diagnostic;
};

/// Semi-decision of "q on the leaf through p": breadth-first search over piecewise flows of the
/// anchors of the generators, on a geometric duration grid with a visited-ball filter.
SameLeafResult same_leaf(const SingularSubalgebroid& B, const Eigen::VectorXd& p,
                         const Eigen::VectorXd& q, const SameLeafOptions& opts = {});

/// Re-integrates the control segments from path.start; returns the endpoint.
Eigen::VectorXd replay_path(const SingularSubalgebroid& B, const LeafPath& path,
                            const FlowOptions& opts = {});

struct GraphCompareReport {
    struct Entry {
        Eigen::VectorXd p, q;
        bool yes1 = false, yes2 = false;
        bool disagree() const { return yes1 != yes2; }
    };
    std::vector<Entry> entries;
    int agreements = 0;
    int disagreements = 0;
    int both_unknown = 0;
};

/// Compares the sampled same-leaf relations of two modules over all ordered grid pairs.
GraphCompareReport graph_equal_sample(const SingularSubalgebroid& B1,
                                      const SingularSubalgebroid& B2,
                                      const std::vector<Eigen::VectorXd>& grid,
                                      const SameLeafOptions& opts = {});

/// A polynomial family c_lambda(x): components in the variables (l, x_1..x_n), c_0 = id.
struct PolyFamily {
    std::vector<Poly> components;
};

struct DiffeologyDifferentiationResult {
    std::vector<Poly> derivative;  // d/dlambda at 0, a polynomial vector field on M
    bool member = false;           // exact membership of the derivative in the foliation module
    bool leaf_preserving = true;   // sampled validation of the family
    std::string detail;
};

/// Differentiates leaf-preserving families through the subspace diffeology of the graph; members
/// certify, non-members exhibit the over-differentiation of Ex. "wrong module from the graph".
std::vector<DiffeologyDifferentiationResult> subspace_diffeology_differentiation(
    const SingularSubalgebroid& B, const std::vector<PolyFamily>& families,
    const std::vector<Eigen::VectorXd>& validation_samples, const SameLeafOptions& opts = {});

struct OpennessReport {
    bool saturation_matches = true;  // sampled saturation equals the predicted set
    bool witness_holds = true;       // (g,0) inside, (g,(eps,0)) outside for all witness data
    bool degenerate = false;         // full-circle control case: saturation is everything
    int samples_checked = 0;
    std::string detail;
    bool pass() const { return degenerate || (saturation_matches && witness_holds); }
};

/// Openness failure of the rotation graph: the saturation of an arc-generated open set satisfies
/// the predicted identity (free action off 0, fixed origin) and the witness (g,0) admits no
/// sampled neighborhood inside the saturation.
OpennessReport openness_counterexample(double arc_lo, double arc_hi,
                                       const std::vector<Eigen::Vector2d>& base_samples,
                                       const std::vector<double>& witness_angles,
                                       const std::vector<double>& witness_eps,
                                       double tol = 1e-9);

}  // namespace folia
