#pragma once

#include "folia/free_module.hpp"

namespace folia {

struct GroebnerOptions {
    int degree_guard = 40;
};

struct DivisionResult {
    FreeModuleElem remainder;
    std::vector<Poly> quotients;  // one per divisor
};

/// Multivariate division in the free module: e = sum quotients[j]*basis[j] + remainder,
/// no remainder term divisible by a basis leading term.
DivisionResult divide(const FreeModuleElem& e, const std::vector<FreeModuleElem>& basis);

/// Buchberger completion in the POT/grevlex order. Throws DegreeGuardError past the bound.
std::vector<FreeModuleElem> buchberger(std::vector<FreeModuleElem> gens, const GroebnerOptions& opts = {});

/// Minimalizes, tail-reduces and makes monic; the result is the unique reduced basis, sorted by
/// decreasing leading term. lifts (if given) is kept consistent: basis[j] = sum lifts[j][i]*original[i].
void reduce_groebner(std::vector<FreeModuleElem>& gb, std::vector<std::vector<Poly>>* lifts = nullptr);

struct NormalFormResult {
    FreeModuleElem remainder;
    std::vector<Poly> certificate;  // with respect to the original generators
    bool member() const { return remainder.is_zero(); }
};

/// A finitely generated submodule of a free module with its Groebner data, lift matrix and a
/// generating set of syzygies of the original generators.
class SubmoduleData {
public:
    SubmoduleData() = default;
    static SubmoduleData compute(std::vector<FreeModuleElem> generators, GroebnerOptions opts = {});

    int rank() const { return rank_; }
    int nvars() const { return nvars_; }
    int generator_count() const { return static_cast<int>(generators_.size()); }
    bool is_zero_module() const { return groebner_.empty(); }

    const std::vector<FreeModuleElem>& generators() const { return generators_; }
    const std::vector<FreeModuleElem>& groebner() const { return groebner_; }
    /// groebner()[j] = sum_i lift()[j][i] * generators()[i], exactly.
    const std::vector<std::vector<Poly>>& lift() const { return lift_; }
    /// Each entry s satisfies sum_i s[i]*generators()[i] = 0, exactly; together they generate Syz.
    const std::vector<std::vector<Poly>>& syzygies() const { return syzygies_; }

    NormalFormResult normal_form(const FreeModuleElem& e) const;
    bool contains(const FreeModuleElem& e) const;

    const GroebnerOptions& options() const { return opts_; }

private:
    int rank_ = 0;
    int nvars_ = 0;
    GroebnerOptions opts_;
    std::vector<FreeModuleElem> generators_;
    std::vector<FreeModuleElem> groebner_;
    std::vector<std::vector<Poly>> lift_;
    std::vector<std::vector<Poly>> syzygies_;
};

/// Convenience: syzygy generators of the given module generators.
std::vector<std::vector<Poly>> syzygies(const std::vector<FreeModuleElem>& gens,
                                        GroebnerOptions opts = {});

}  // namespace folia
