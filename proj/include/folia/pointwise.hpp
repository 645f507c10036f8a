#pragma once

#include "folia/geometry.hpp"

namespace folia {

/// Pointwise data of the module at a rational point: the evaluation image, the fiber B/I_x B and
/// the isotropy Lie algebra with its structure constants. All entries are exact.
struct FiberReport {
    RatVec point;
    int dim_ev = 0;        // dim B_x
    int dim_fiber = 0;     // dim B/I_x B
    int dim_isotropy = 0;  // dim b_x
    /// Class representatives of the isotropy inside the module (each vanishes at the point).
    std::vector<FreeModuleElem> isotropy_basis;
    /// Class coordinates of the representatives with respect to the generators.
    std::vector<RatVec> isotropy_classes;
    /// Nonzero c^k_{ij} of the isotropy Lie algebra, as (i, j, k, c) with i < j.
    std::vector<std::tuple<int, int, int, Rat>> structure_constants;
    bool jacobi_ok = true;

    Rat structure_constant(int i, int j, int k) const;
};

FiberReport fiber_report(const SingularSubalgebroid& B, const RatVec& x);

/// Just the fiber dimension (cheaper than the full report).
int fiber_dimension(const SingularSubalgebroid& B, const RatVec& x);

struct ProjectivityReport {
    enum class Verdict { Projective, NonProjective };
    std::vector<RatVec> points;
    std::vector<int> dims;
    Verdict verdict = Verdict::Projective;
    int rank = -1;                         // constant sampled dimension when projective
    int witness_a = -1, witness_b = -1;    // indices of a differing pair otherwise
    std::string smoothness_verdict;        // sampled verdict for H^G(B)
};

ProjectivityReport projectivity_scan(const SingularSubalgebroid& B, const std::vector<RatVec>& points);

struct LocalGeneratorsReport {
    bool basis_at_base = false;     // candidate classes form a basis of the fiber at x
    bool global_generation = false; // every original generator lies in <candidates>
    std::vector<std::pair<RatVec, bool>> probe_basis;  // classes stay a basis at nearby probes
    std::string detail;
    bool pass() const;
};

/// Throws InputError when the candidates fail the basis precondition at x.
LocalGeneratorsReport local_generators_check(const SingularSubalgebroid& B, const RatVec& x,
                                             const std::vector<FreeModuleElem>& candidates,
                                             const std::vector<RatVec>& probes);

struct LeafRankReport {
    std::vector<FiberReport> samples;
    bool ev_constant = true;
    bool fiber_constant = true;
    int rank_BL = -1;      // rank of the evaluation bundle along the leaf
    int rank_fiberwise = -1;  // rank of the fiber bundle B/I_x B along the leaf
    int offending_a = -1, offending_b = -1;
    bool consistent() const { return ev_constant && fiber_constant; }
};

LeafRankReport leaf_rank_report(const SingularSubalgebroid& B, const std::vector<RatVec>& samples);

struct PullbackDimReport {
    int dim_base = 0;      // dim of the fiber at x on M
    int dim_pullback = 0;  // dim of the pulled-back module's fiber at (x, y) on M x M
    bool pass() const { return dim_base == dim_pullback; }
};

/// Pair-groupoid pullback: the module on M x M generated by the sections in the first factor has
/// the same fiber dimension at (x, y) as the original at x. Tangent ambient only.
PullbackDimReport pullback_dim_check(const SingularSubalgebroid& B, const RatVec& x, const RatVec& y);

}  // namespace folia
