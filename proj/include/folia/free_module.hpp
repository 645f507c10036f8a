#pragma once

#include <optional>

#include "folia/poly.hpp"

namespace folia {

/// A section of the trivialized bundle in a fixed frame: one polynomial per frame element.
class FreeModuleElem {
public:
    FreeModuleElem() = default;
    FreeModuleElem(int rank, int nvars);
    explicit FreeModuleElem(std::vector<Poly> components);

    static FreeModuleElem unit(int rank, int nvars, int pos);

    int rank() const { return static_cast<int>(components_.size()); }
    int nvars() const { return nvars_; }
    bool is_zero() const;
    int degree() const;  // max over components, -1 if zero

    const Poly& operator[](int i) const { return components_[i]; }
    Poly& operator[](int i) { return components_[i]; }
    const std::vector<Poly>& components() const { return components_; }

    FreeModuleElem& operator+=(const FreeModuleElem& rhs);
    FreeModuleElem& operator-=(const FreeModuleElem& rhs);
    FreeModuleElem& operator*=(const Poly& f);
    FreeModuleElem& operator*=(const Rat& c);
    FreeModuleElem operator-() const;

    friend FreeModuleElem operator+(FreeModuleElem a, const FreeModuleElem& b) { return a += b; }
    friend FreeModuleElem operator-(FreeModuleElem a, const FreeModuleElem& b) { return a -= b; }
    friend FreeModuleElem operator*(const Poly& f, FreeModuleElem a) { return a *= f; }
    friend FreeModuleElem operator*(const Rat& c, FreeModuleElem a) { return a *= c; }

    bool operator==(const FreeModuleElem& rhs) const;
    bool operator!=(const FreeModuleElem& rhs) const { return !(*this == rhs); }

    RatVec evaluate(const RatVec& point) const;
    std::vector<double> evaluate(const std::vector<double>& point) const;

    std::string to_string(const std::vector<std::string>& var_names,
                          const std::vector<std::string>& frame_names) const;

private:
    int nvars_ = 0;
    std::vector<Poly> components_;
};

/// A module monomial: a frame position together with a monomial. Position-over-term order,
/// lower position dominates.
struct ModuleTerm {
    int pos = -1;
    Exponents mono;
    Rat coeff;
};

/// true iff (pos_a, a) is strictly smaller than (pos_b, b) in the POT order
bool module_term_less(int pos_a, const Exponents& a, int pos_b, const Exponents& b);

std::optional<ModuleTerm> leading_term(const FreeModuleElem& e);

}  // namespace folia
