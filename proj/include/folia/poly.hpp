#pragma once

#include <map>
#include <string>
#include <vector>

#include "folia/rational.hpp"

namespace folia {

using Exponents = std::vector<unsigned>;

unsigned total_degree(const Exponents& e);
bool exp_divides(const Exponents& a, const Exponents& b);  // a | b componentwise
Exponents exp_sub(const Exponents& b, const Exponents& a);
Exponents exp_add(const Exponents& a, const Exponents& b);
Exponents exp_lcm(const Exponents& a, const Exponents& b);

/// Graded reverse lexicographic order; ties broken so the map's last entry is the leading monomial.
struct GrevlexLess {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Exact multivariate polynomial over the rationals. No zero coefficients are stored.
class Poly {
public:
    using TermMap = std::map<Exponents, Rat, GrevlexLess>;

    Poly() : nvars_(0) {}
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly constant(int nvars, const Rat& c);
    static Poly variable(int nvars, int index, unsigned power = 1);
    static Poly monomial(int nvars, Exponents exps, const Rat& c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    /// Total degree; -1 for the zero polynomial.
    int degree() const;
    const TermMap& terms() const { return terms_; }
    bool is_constant() const;
    Rat constant_value() const;  // coefficient of the 1 monomial

    Poly& operator+=(const Poly& rhs);
    Poly& operator-=(const Poly& rhs);
    Poly& operator*=(const Poly& rhs);
    Poly& operator*=(const Rat& c);
    Poly operator-() const;

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
    friend Poly operator*(Poly a, const Rat& c) { return a *= c; }
    friend Poly operator*(const Rat& c, Poly a) { return a *= c; }

    bool operator==(const Poly& rhs) const { return nvars_ == rhs.nvars_ && terms_ == rhs.terms_; }
    bool operator!=(const Poly& rhs) const { return !(*this == rhs); }

    void add_term(const Exponents& e, const Rat& c);

    Poly derivative(int var) const;
    Rat evaluate(const RatVec& point) const;
    double evaluate(const std::vector<double>& point) const;
    /// Substitutes a constant for one variable; the result still has the same nvars.
    Poly set_var(int var, const Rat& value) const;
    /// Removes a variable the polynomial does not depend on.
    Poly drop_var(int var) const;
    /// Reinterprets in a wider variable list; old variable i becomes variable map[i].
    Poly embed(int new_nvars, const std::vector<int>& var_map) const;
    bool depends_on(int var) const;

    std::string to_string(const std::vector<std::string>& var_names) const;

private:
    int nvars_;
    TermMap terms_;
};

}  // namespace folia
