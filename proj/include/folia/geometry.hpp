#pragma once

#include "folia/linalg_exact.hpp"
#include "folia/submodule.hpp"

namespace folia {

enum class AmbientKind { Tangent, LieAlgebra, LinearAction };

/// The ambient Lie algebroid in a fixed global frame: the tangent bundle of R^n, a matrix Lie
/// algebra over a point, or a linear action algebroid g x R^d -> R^d. Structure constants are
/// derived from the matrix realization and checked exactly at construction.
class AmbientAlgebroid {
public:
    static AmbientAlgebroid tangent(std::vector<std::string> var_names);
    static AmbientAlgebroid lie_algebra(std::string name, std::vector<RatMat> realization);
    static AmbientAlgebroid linear_action(std::string name, std::vector<RatMat> realization,
                                          std::vector<std::string> var_names);
    /// so2, so3, su2, gl2, t2 as Lie algebras; so2, so3, gl2 as linear actions.
    static AmbientAlgebroid named(AmbientKind kind, const std::string& name);

    AmbientKind kind() const { return kind_; }
    int rank() const;
    int nvars() const { return static_cast<int>(var_names_.size()); }
    int matrix_dim() const;
    const std::string& name() const { return name_; }
    const std::vector<std::string>& var_names() const { return var_names_; }
    std::vector<std::string> frame_names() const;
    const std::vector<RatMat>& realization() const { return realization_; }

    /// c^k_{ab} with [e_a, e_b] = sum_k c^k_{ab} e_k.
    const Rat& structure_constant(int a, int b, int k) const;

    /// rho(e_a) as a polynomial vector field (componentwise), zero for a Lie algebra over a point.
    std::vector<Poly> anchor_of_frame(int a) const;
    /// rho(alpha) for a module element in this frame; the result has nvars() components.
    std::vector<Poly> anchor_field(const FreeModuleElem& section) const;

    /// The Lie algebroid bracket in this frame. Tangent: Jacobi-Lie bracket of vector fields;
    /// matrix kinds: bilinear extension with the Leibniz anchor terms.
    FreeModuleElem bracket(const FreeModuleElem& a, const FreeModuleElem& b) const;

    /// Realization matrix of a constant-coefficient combination, as doubles (matrix kinds only).
    RatMat realize(const RatVec& frame_coeffs) const;

    bool operator==(const AmbientAlgebroid& rhs) const;

private:
    AmbientAlgebroid() = default;
    void derive_structure_constants(bool action_orientation);
    void check_jacobi() const;

    AmbientKind kind_ = AmbientKind::Tangent;
    std::string name_;
    std::vector<std::string> var_names_;
    std::vector<RatMat> realization_;             // empty for tangent
    std::vector<std::vector<RatVec>> structure_;  // structure_[a][b][k] = c^k_{ab}
};

struct Involutivity {
    enum class State { Unchecked, Verified, Refuted };
    State state = State::Unchecked;
    int witness_i = -1;
    int witness_j = -1;
    FreeModuleElem witness_bracket;
};

/// A finitely generated module of sections of the ambient algebroid together with its exact
/// Groebner data and the involutivity verdict.
class SingularSubalgebroid {
public:
    SingularSubalgebroid(AmbientAlgebroid ambient, std::vector<FreeModuleElem> generators,
                         GroebnerOptions opts = {});

    const AmbientAlgebroid& ambient() const { return ambient_; }
    const SubmoduleData& module() const { return module_; }
    const std::vector<FreeModuleElem>& generators() const { return module_.generators(); }
    int generator_count() const { return module_.generator_count(); }

    const Involutivity& check_involutive() const;
    const Involutivity& involutivity() const { return involutivity_; }
    bool is_involutive() const { return check_involutive().state == Involutivity::State::Verified; }

private:
    AmbientAlgebroid ambient_;
    SubmoduleData module_;
    mutable Involutivity involutivity_;
};

/// Module of sections restricting to a subframe along the coordinate subspace
/// {x_{n+1} = ... = x_m = 0}: the subframe sections plus x_i * e_j for i > n, j > b.
SingularSubalgebroid subalgebroid_over_submanifold(const AmbientAlgebroid& ambient,
                                                   int submanifold_dim, int subframe_rank,
                                                   GroebnerOptions opts = {});

/// The induced foliation rho(B) as a module of vector fields over the tangent ambient.
SingularSubalgebroid induced_foliation(const SingularSubalgebroid& B, GroebnerOptions opts = {});

}  // namespace folia
