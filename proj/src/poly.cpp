#include "folia/poly.hpp"

#include <algorithm>
#include <sstream>

#include "folia/errors.hpp"

namespace folia {

unsigned total_degree(const Exponents& e) {
    unsigned d = 0;
    for (unsigned x : e) d += x;
    return d;
}

bool exp_divides(const Exponents& a, const Exponents& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Exponents exp_sub(const Exponents& b, const Exponents& a) {
    Exponents out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = b[i] - a[i];
    return out;
}

Exponents exp_add(const Exponents& a, const Exponents& b) {
    Exponents out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Exponents exp_lcm(const Exponents& a, const Exponents& b) {
    Exponents out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
    return out;
}

bool GrevlexLess::operator()(const Exponents& a, const Exponents& b) const {
    unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    // same degree: a < b iff the last index where they differ has a[i] > b[i]
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

Poly Poly::constant(int nvars, const Rat& c) {
    Poly p(nvars);
    if (c != 0) p.terms_.emplace(Exponents(nvars, 0), c);
    return p;
}

Poly Poly::variable(int nvars, int index, unsigned power) {
    if (index < 0 || index >= nvars) throw InputError("variable index out of range");
    Poly p(nvars);
    Exponents e(nvars, 0);
    e[index] = power;
    if (power == 0) e[index] = 0;
    p.terms_.emplace(std::move(e), Rat(1));
    return p;
}

Poly Poly::monomial(int nvars, Exponents exps, const Rat& c) {
    if (static_cast<int>(exps.size()) != nvars) throw InputError("exponent vector length mismatch");
    Poly p(nvars);
    if (c != 0) p.terms_.emplace(std::move(exps), c);
    return p;
}

int Poly::degree() const {
    if (terms_.empty()) return -1;
    // grevlex is graded, so the map's last key has maximal total degree
    return static_cast<int>(total_degree(terms_.rbegin()->first));
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

Rat Poly::constant_value() const {
    Exponents one(nvars_, 0);
    auto it = terms_.find(one);
    return it == terms_.end() ? Rat(0) : it->second;
}

void Poly::add_term(const Exponents& e, const Rat& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& rhs) {
    if (nvars_ != rhs.nvars_) throw InputError("polynomial variable-count mismatch");
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& rhs) {
    if (nvars_ != rhs.nvars_) throw InputError("polynomial variable-count mismatch");
    for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
    return *this;
}

Poly& Poly::operator*=(const Poly& rhs) {
    if (nvars_ != rhs.nvars_) throw InputError("polynomial variable-count mismatch");
    Poly out(nvars_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : rhs.terms_) out.add_term(exp_add(ea, eb), ca * cb);
    *this = std::move(out);
    return *this;
}

Poly& Poly::operator*=(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, coeff] : terms_) coeff *= c;
    return *this;
}

Poly Poly::operator-() const {
    Poly out(nvars_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
}

Poly Poly::derivative(int var) const {
    if (var < 0 || var >= nvars_) throw InputError("derivative variable out of range");
    Poly out(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents d = e;
        d[var] -= 1;
        out.add_term(d, c * Rat(static_cast<long>(e[var])));
    }
    return out;
}

Rat Poly::evaluate(const RatVec& point) const {
    if (static_cast<int>(point.size()) != nvars_) throw InputError("evaluation point dimension mismatch");
    Rat acc(0);
    for (const auto& [e, c] : terms_) {
        Rat term = c;
        for (int i = 0; i < nvars_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) term *= point[i];
        acc += term;
    }
    return acc;
}

double Poly::evaluate(const std::vector<double>& point) const {
    if (static_cast<int>(point.size()) != nvars_) throw InputError("evaluation point dimension mismatch");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = c.get_d();
        for (int i = 0; i < nvars_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) term *= point[i];
        acc += term;
    }
    return acc;
}

Poly Poly::set_var(int var, const Rat& value) const {
    if (var < 0 || var >= nvars_) throw InputError("substitution variable out of range");
    Poly out(nvars_);
    for (const auto& [e, c] : terms_) {
        Rat coeff = c;
        for (unsigned k = 0; k < e[var]; ++k) coeff *= value;
        Exponents reduced = e;
        reduced[var] = 0;
        out.add_term(reduced, coeff);
    }
    return out;
}

bool Poly::depends_on(int var) const {
    for (const auto& [e, c] : terms_)
        if (e[var] > 0) return true;
    return false;
}

Poly Poly::drop_var(int var) const {
    if (depends_on(var)) throw InputError("drop_var: polynomial depends on the variable");
    Poly out(nvars_ - 1);
    for (const auto& [e, c] : terms_) {
        Exponents reduced;
        reduced.reserve(nvars_ - 1);
        for (int i = 0; i < nvars_; ++i)
            if (i != var) reduced.push_back(e[i]);
        out.add_term(reduced, c);
    }
    return out;
}

Poly Poly::embed(int new_nvars, const std::vector<int>& var_map) const {
    if (static_cast<int>(var_map.size()) != nvars_) throw InputError("embed: variable map size mismatch");
    Poly out(new_nvars);
    for (const auto& [e, c] : terms_) {
        Exponents widened(new_nvars, 0);
        for (int i = 0; i < nvars_; ++i) widened[var_map[i]] = e[i];
        out.add_term(widened, c);
    }
    return out;
}

std::string Poly::to_string(const std::vector<std::string>& var_names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // print leading monomial first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rat a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool printed_coeff = false;
        if (a != 1 || total_degree(e) == 0) {
            os << a.get_str();
            printed_coeff = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (printed_coeff) os << "*";
            os << var_names[i];
            if (e[i] > 1) os << "^" << e[i];
            printed_coeff = true;
        }
    }
    return os.str();
}

}  // namespace folia
