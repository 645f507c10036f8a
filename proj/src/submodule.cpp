#include "folia/submodule.hpp"

#include <algorithm>
#include <deque>

#include "folia/errors.hpp"

namespace folia {

namespace {

// scaled multiple c * x^shift * e
FreeModuleElem term_multiple(const FreeModuleElem& e, const Rat& c, const Exponents& shift) {
    Poly factor = Poly::monomial(e.nvars(), shift, c);
    FreeModuleElem out = e;
    out *= factor;
    return out;
}

void guard_degree(const FreeModuleElem& e, const GroebnerOptions& opts) {
    int d = e.degree();
    if (d > opts.degree_guard) throw DegreeGuardError(d, opts.degree_guard);
}

}  // namespace

DivisionResult divide(const FreeModuleElem& e, const std::vector<FreeModuleElem>& basis) {
    DivisionResult res;
    res.remainder = FreeModuleElem(e.rank(), e.nvars());
    res.quotients.assign(basis.size(), Poly(e.nvars()));

    std::vector<std::optional<ModuleTerm>> lts(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) lts[j] = leading_term(basis[j]);

    FreeModuleElem work = e;
    while (true) {
        auto lt = leading_term(work);
        if (!lt) break;
        bool reduced = false;
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (!lts[j]) continue;
            if (lts[j]->pos != lt->pos || !exp_divides(lts[j]->mono, lt->mono)) continue;
            Rat c = lt->coeff / lts[j]->coeff;
            Exponents shift = exp_sub(lt->mono, lts[j]->mono);
            work -= term_multiple(basis[j], c, shift);
            res.quotients[j] += Poly::monomial(e.nvars(), shift, c);
            reduced = true;
            break;
        }
        if (!reduced) {
            // move the leading term to the remainder
            Poly t = Poly::monomial(e.nvars(), lt->mono, lt->coeff);
            res.remainder[lt->pos] += t;
            work[lt->pos] -= t;
        }
    }
    return res;
}

std::vector<FreeModuleElem> buchberger(std::vector<FreeModuleElem> gens, const GroebnerOptions& opts) {
    std::vector<FreeModuleElem> basis;
    for (auto& g : gens)
        if (!g.is_zero()) basis.push_back(std::move(g));

    std::deque<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) pairs.emplace_back(i, j);

    while (!pairs.empty()) {
        auto [i, j] = pairs.front();
        pairs.pop_front();
        auto lti = leading_term(basis[i]);
        auto ltj = leading_term(basis[j]);
        if (lti->pos != ltj->pos) continue;  // S-pairs only within one frame position
        Exponents lcm = exp_lcm(lti->mono, ltj->mono);
        FreeModuleElem spoly =
            term_multiple(basis[i], 1 / lti->coeff, exp_sub(lcm, lti->mono)) -
            term_multiple(basis[j], 1 / ltj->coeff, exp_sub(lcm, ltj->mono));
        FreeModuleElem rem = divide(spoly, basis).remainder;
        if (rem.is_zero()) continue;
        guard_degree(rem, opts);
        basis.push_back(std::move(rem));
        for (std::size_t k = 0; k + 1 < basis.size(); ++k) pairs.emplace_back(k, basis.size() - 1);
    }
    return basis;
}

void reduce_groebner(std::vector<FreeModuleElem>& gb, std::vector<std::vector<Poly>>* lifts) {
    // drop elements whose leading term is divisible by another's
    std::vector<bool> keep(gb.size(), true);
    for (std::size_t i = 0; i < gb.size(); ++i) {
        if (!keep[i]) continue;
        auto lti = leading_term(gb[i]);
        if (!lti) {
            keep[i] = false;
            continue;
        }
        for (std::size_t j = 0; j < gb.size(); ++j) {
            if (i == j || !keep[j]) continue;
            auto ltj = leading_term(gb[j]);
            if (ltj->pos != lti->pos || !exp_divides(ltj->mono, lti->mono)) continue;
            if (lti->mono == ltj->mono && i < j) continue;  // keep the first of equal leads
            keep[i] = false;
            break;
        }
    }
    std::vector<FreeModuleElem> minimal;
    std::vector<std::vector<Poly>> minimal_lifts;
    for (std::size_t i = 0; i < gb.size(); ++i) {
        if (!keep[i]) continue;
        minimal.push_back(gb[i]);
        if (lifts) minimal_lifts.push_back((*lifts)[i]);
    }

    // tail-reduce every element against the others, tracking lifts
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<FreeModuleElem> others;
        std::vector<std::size_t> other_idx;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) {
                others.push_back(minimal[j]);
                other_idx.push_back(j);
            }
        DivisionResult d = divide(minimal[i], others);
        if (lifts) {
            for (std::size_t oj = 0; oj < others.size(); ++oj) {
                if (d.quotients[oj].is_zero()) continue;
                auto& target = minimal_lifts[i];
                const auto& src = minimal_lifts[other_idx[oj]];
                for (std::size_t c = 0; c < target.size(); ++c)
                    target[c] -= d.quotients[oj] * src[c];
            }
        }
        minimal[i] = d.remainder;
    }

    // monic normalization
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        auto lt = leading_term(minimal[i]);
        Rat inv = 1 / lt->coeff;
        minimal[i] *= inv;
        if (lifts)
            for (auto& p : minimal_lifts[i]) p *= inv;
    }

    // canonical order: decreasing leading term
    std::vector<std::size_t> order(minimal.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto la = leading_term(minimal[a]);
        auto lb = leading_term(minimal[b]);
        return module_term_less(lb->pos, lb->mono, la->pos, la->mono);
    });
    std::vector<FreeModuleElem> sorted;
    std::vector<std::vector<Poly>> sorted_lifts;
    for (std::size_t idx : order) {
        sorted.push_back(std::move(minimal[idx]));
        if (lifts) sorted_lifts.push_back(std::move(minimal_lifts[idx]));
    }
    gb = std::move(sorted);
    if (lifts) *lifts = std::move(sorted_lifts);
}

SubmoduleData SubmoduleData::compute(std::vector<FreeModuleElem> generators, GroebnerOptions opts) {
    if (generators.empty()) throw InputError("submodule needs at least one generator");
    SubmoduleData data;
    data.opts_ = opts;
    data.rank_ = generators[0].rank();
    data.nvars_ = generators[0].nvars();
    for (const auto& g : generators)
        if (g.rank() != data.rank_ || g.nvars() != data.nvars_)
            throw InputError("generators must share rank and variable count");
    data.generators_ = std::move(generators);

    const int r = data.rank_;
    const int k = data.generator_count();
    const int n = data.nvars_;

    // extended module in rank r+k: the tag block (positions >= r) records the expression of each
    // element in the original generators; the POT order eliminates the real block first
    std::vector<FreeModuleElem> ext;
    ext.reserve(k);
    for (int i = 0; i < k; ++i) {
        FreeModuleElem e(r + k, n);
        for (int c = 0; c < r; ++c) e[c] = data.generators_[i][c];
        e[r + i] = Poly::constant(n, Rat(1));
        ext.push_back(std::move(e));
    }
    std::vector<FreeModuleElem> gb_ext = buchberger(std::move(ext), opts);
    reduce_groebner(gb_ext);

    for (const auto& elem : gb_ext) {
        bool real_nonzero = false;
        for (int c = 0; c < r; ++c)
            if (!elem[c].is_zero()) {
                real_nonzero = true;
                break;
            }
        std::vector<Poly> tag(elem.components().begin() + r, elem.components().end());
        if (real_nonzero) {
            std::vector<Poly> real(elem.components().begin(), elem.components().begin() + r);
            data.groebner_.emplace_back(std::move(real));
            data.lift_.push_back(std::move(tag));
        } else {
            data.syzygies_.push_back(std::move(tag));
        }
    }
    return data;
}

NormalFormResult SubmoduleData::normal_form(const FreeModuleElem& e) const {
    if (e.rank() != rank_ || e.nvars() != nvars_)
        throw InputError("normal_form: rank or variable count mismatch");
    NormalFormResult out;
    out.certificate.assign(generator_count(), Poly(nvars_));
    if (groebner_.empty()) {
        out.remainder = e;
        return out;
    }
    DivisionResult d = divide(e, groebner_);
    out.remainder = std::move(d.remainder);
    for (std::size_t j = 0; j < groebner_.size(); ++j) {
        if (d.quotients[j].is_zero()) continue;
        for (int i = 0; i < generator_count(); ++i)
            out.certificate[i] += d.quotients[j] * lift_[j][i];
    }
    return out;
}

bool SubmoduleData::contains(const FreeModuleElem& e) const {
    return normal_form(e).member();
}

std::vector<std::vector<Poly>> syzygies(const std::vector<FreeModuleElem>& gens, GroebnerOptions opts) {
    return SubmoduleData::compute(gens, opts).syzygies();
}

}  // namespace folia
