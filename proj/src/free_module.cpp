#include "folia/free_module.hpp"

#include <algorithm>

#include "folia/errors.hpp"

namespace folia {

FreeModuleElem::FreeModuleElem(int rank, int nvars)
    : nvars_(nvars), components_(rank, Poly(nvars)) {}

FreeModuleElem::FreeModuleElem(std::vector<Poly> components) : components_(std::move(components)) {
    if (components_.empty()) throw InputError("module element needs at least one component");
    nvars_ = components_[0].nvars();
    for (const auto& p : components_)
        if (p.nvars() != nvars_) throw InputError("mixed variable counts in module element");
}

FreeModuleElem FreeModuleElem::unit(int rank, int nvars, int pos) {
    FreeModuleElem e(rank, nvars);
    e.components_[pos] = Poly::constant(nvars, Rat(1));
    return e;
}

bool FreeModuleElem::is_zero() const {
    return std::all_of(components_.begin(), components_.end(),
                       [](const Poly& p) { return p.is_zero(); });
}

int FreeModuleElem::degree() const {
    int d = -1;
    for (const auto& p : components_) d = std::max(d, p.degree());
    return d;
}

FreeModuleElem& FreeModuleElem::operator+=(const FreeModuleElem& rhs) {
    if (rank() != rhs.rank()) throw InputError("module element rank mismatch");
    for (int i = 0; i < rank(); ++i) components_[i] += rhs.components_[i];
    return *this;
}

FreeModuleElem& FreeModuleElem::operator-=(const FreeModuleElem& rhs) {
    if (rank() != rhs.rank()) throw InputError("module element rank mismatch");
    for (int i = 0; i < rank(); ++i) components_[i] -= rhs.components_[i];
    return *this;
}

FreeModuleElem& FreeModuleElem::operator*=(const Poly& f) {
    for (auto& p : components_) p *= f;
    return *this;
}

FreeModuleElem& FreeModuleElem::operator*=(const Rat& c) {
    for (auto& p : components_) p *= c;
    return *this;
}

FreeModuleElem FreeModuleElem::operator-() const {
    FreeModuleElem out = *this;
    for (auto& p : out.components_) p = -p;
    return out;
}

bool FreeModuleElem::operator==(const FreeModuleElem& rhs) const {
    return nvars_ == rhs.nvars_ && components_ == rhs.components_;
}

RatVec FreeModuleElem::evaluate(const RatVec& point) const {
    RatVec out(rank());
    for (int i = 0; i < rank(); ++i) out[i] = components_[i].evaluate(point);
    return out;
}

std::vector<double> FreeModuleElem::evaluate(const std::vector<double>& point) const {
    std::vector<double> out(rank());
    for (int i = 0; i < rank(); ++i) out[i] = components_[i].evaluate(point);
    return out;
}

std::string FreeModuleElem::to_string(const std::vector<std::string>& var_names,
                                      const std::vector<std::string>& frame_names) const {
    std::string out;
    bool first = true;
    for (int i = 0; i < rank(); ++i) {
        if (components_[i].is_zero()) continue;
        std::string part = components_[i].to_string(var_names);
        if (!first) out += " + ";
        if (part == "1")
            out += frame_names[i];
        else if (part == "-1")
            out += "-" + frame_names[i];
        else if (components_[i].terms().size() == 1)
            out += part + "*" + frame_names[i];
        else
            out += "(" + part + ")*" + frame_names[i];
        first = false;
    }
    return first ? "0" : out;
}

bool module_term_less(int pos_a, const Exponents& a, int pos_b, const Exponents& b) {
    if (pos_a != pos_b) return pos_a > pos_b;  // lower position dominates
    return GrevlexLess{}(a, b);
}

std::optional<ModuleTerm> leading_term(const FreeModuleElem& e) {
    std::optional<ModuleTerm> best;
    for (int pos = 0; pos < e.rank(); ++pos) {
        const auto& terms = e[pos].terms();
        if (terms.empty()) continue;
        const auto& [mono, coeff] = *terms.rbegin();
        if (!best || module_term_less(best->pos, best->mono, pos, mono))
            best = ModuleTerm{pos, mono, coeff};
    }
    return best;
}

}  // namespace folia
