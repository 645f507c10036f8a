#pragma once

#include <random>
#include <string>

#include "folia/linalg_exact.hpp"
#include "folia/submodule.hpp"

namespace folia::testutil {

inline std::string data_path(const std::string& name) {
    return std::string(FOLIA_DATA_DIR) + "/" + name;
}

inline Rat random_rat(std::mt19937_64& rng, int max_abs = 5) {
    std::uniform_int_distribution<long> num(-max_abs, max_abs);
    std::uniform_int_distribution<long> den(1, 3);
    return rat(num(rng), den(rng));
}

inline Poly random_poly(std::mt19937_64& rng, int nvars, int max_deg = 2, int terms = 3) {
    Poly p(nvars);
    std::uniform_int_distribution<int> deg(0, max_deg);
    for (int t = 0; t < terms; ++t) {
        Exponents e(nvars, 0);
        int budget = deg(rng);
        for (int i = 0; i < nvars && budget > 0; ++i) {
            std::uniform_int_distribution<int> take(0, budget);
            int d = take(rng);
            e[i] = static_cast<unsigned>(d);
            budget -= d;
        }
        p.add_term(e, random_rat(rng));
    }
    return p;
}

inline FreeModuleElem random_elem(std::mt19937_64& rng, int rank, int nvars, int max_deg = 2) {
    FreeModuleElem e(rank, nvars);
    for (int i = 0; i < rank; ++i) e[i] = random_poly(rng, nvars, max_deg);
    return e;
}

inline void enumerate_monomials(int nvars, int max_deg, std::vector<Exponents>& out) {
    Exponents cur(nvars, 0);
    std::function<void(int, int)> rec = [&](int axis, int budget) {
        if (axis == nvars) {
            out.push_back(cur);
            return;
        }
        for (int d = 0; d <= budget; ++d) {
            cur[axis] = static_cast<unsigned>(d);
            rec(axis + 1, budget - d);
        }
        cur[axis] = 0;
    };
    rec(0, max_deg);
}

/// Every syzygy with coefficient degree <= max_deg, by exact linear algebra. Test oracle,
/// independent of the Groebner engine.
inline std::vector<std::vector<Poly>> brute_force_syzygies(const std::vector<FreeModuleElem>& gens,
                                                           int max_deg) {
    const int k = static_cast<int>(gens.size());
    const int nvars = gens[0].nvars();
    const int rank = gens[0].rank();
    std::vector<Exponents> monos;
    enumerate_monomials(nvars, max_deg, monos);
    const int M = static_cast<int>(monos.size());

    // unknown j*M + t is the coefficient of monomial t in s_j; constraints: every monomial of
    // every component of sum_j s_j g_j vanishes
    int max_out_deg = 0;
    for (const auto& g : gens) max_out_deg = std::max(max_out_deg, g.degree());
    std::vector<Exponents> out_monos;
    enumerate_monomials(nvars, max_deg + std::max(max_out_deg, 0), out_monos);
    std::map<Exponents, int, GrevlexLess> out_index;
    for (std::size_t i = 0; i < out_monos.size(); ++i)
        out_index[out_monos[i]] = static_cast<int>(i);

    RatMat system = rat_mat(rank * static_cast<int>(out_monos.size()), k * M);
    for (int j = 0; j < k; ++j)
        for (int t = 0; t < M; ++t)
            for (int c = 0; c < rank; ++c)
                for (const auto& [e, coeff] : gens[j][c].terms()) {
                    Exponents prod = exp_add(monos[t], e);
                    int row = c * static_cast<int>(out_monos.size()) + out_index.at(prod);
                    system[row][j * M + t] += coeff;
                }

    std::vector<RatVec> kernel = kernel_basis(std::move(system));
    std::vector<std::vector<Poly>> out;
    for (const auto& v : kernel) {
        std::vector<Poly> syz(k, Poly(nvars));
        for (int j = 0; j < k; ++j)
            for (int t = 0; t < M; ++t)
                if (v[j * M + t] != 0) syz[j].add_term(monos[t], v[j * M + t]);
        out.push_back(std::move(syz));
    }
    return out;
}

inline FreeModuleElem syzygy_as_elem(const std::vector<Poly>& s) {
    return FreeModuleElem(s);
}

}  // namespace folia::testutil
