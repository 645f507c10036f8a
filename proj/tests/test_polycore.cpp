#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "folia/errors.hpp"
#include "test_util.hpp"

using namespace folia;
using namespace folia::testutil;

namespace {

Poly X(int nvars, int i) { return Poly::variable(nvars, i); }

FreeModuleElem elem2(Poly a, Poly b) { return FreeModuleElem({std::move(a), std::move(b)}); }

}  // namespace

TEST_CASE("ring axioms on random triples") {
    std::mt19937_64 rng(42);
    for (int it = 0; it < 200; ++it) {
        Poly a = random_poly(rng, 2), b = random_poly(rng, 2), c = random_poly(rng, 2);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK(a - a == Poly(2));
    }
}

TEST_CASE("evaluation examples") {
    Poly x2 = X(1, 0) * X(1, 0);
    CHECK(x2.evaluate(RatVec{rat(0)}) == rat(0));
    CHECK(x2.evaluate(RatVec{rat(2)}) == rat(4));
    FreeModuleElem rot = elem2(-X(2, 1), X(2, 0));
    RatVec v = rot.evaluate(RatVec{rat(1), rat(0)});
    CHECK(v[0] == rat(0));
    CHECK(v[1] == rat(1));
    CHECK_THROWS_AS(x2.evaluate(RatVec{rat(1), rat(1)}), InputError);
}

TEST_CASE("grevlex order sanity") {
    // x^2 > xy > y^2 > x > y > 1 in two variables
    GrevlexLess less;
    Exponents x2{2, 0}, xy{1, 1}, y2{0, 2}, x{1, 0}, y{0, 1}, one{0, 0};
    CHECK(less(xy, x2));
    CHECK(less(y2, xy));
    CHECK(less(x, y2));
    CHECK(less(y, x));
    CHECK(less(one, y));
}

TEST_CASE("normal form membership examples") {
    // S = <(1,0), (0,x)> in R[x,y]^2
    Poly one = Poly::constant(2, rat(1));
    std::vector<FreeModuleElem> gens{elem2(one, Poly(2)), elem2(Poly(2), X(2, 0))};
    SubmoduleData S = SubmoduleData::compute(gens);

    SUBCASE("(0,1) is not a member") {
        NormalFormResult nf = S.normal_form(elem2(Poly(2), Poly::constant(2, rat(1))));
        CHECK_FALSE(nf.member());
        CHECK(nf.remainder == elem2(Poly(2), Poly::constant(2, rat(1))));
    }
    SUBCASE("(x,0) is a generator multiple with certificate (x,0)") {
        NormalFormResult nf = S.normal_form(elem2(X(2, 0), Poly(2)));
        CHECK(nf.member());
        CHECK(nf.certificate[0] == X(2, 0));
        CHECK(nf.certificate[1] == Poly(2));
    }
    SUBCASE("rank mismatch is an input error") {
        CHECK_THROWS_AS(S.normal_form(FreeModuleElem(3, 2)), InputError);
    }
}

TEST_CASE("identity case x^2 dx in <x^2 dx>") {
    Poly x2 = X(1, 0) * X(1, 0);
    SubmoduleData S = SubmoduleData::compute({FreeModuleElem({x2})});
    NormalFormResult nf = S.normal_form(FreeModuleElem({x2}));
    CHECK(nf.member());
    CHECK(nf.certificate[0] == Poly::constant(1, rat(1)));
}

TEST_CASE("syzygies of the vanishing-at-origin generators") {
    // (x,0), (y,0), (0,x), (0,y): Koszul relations (y,-x,0,0) and (0,0,y,-x)
    std::vector<FreeModuleElem> gens{elem2(X(2, 0), Poly(2)), elem2(X(2, 1), Poly(2)),
                                     elem2(Poly(2), X(2, 0)), elem2(Poly(2), X(2, 1))};
    SubmoduleData S = SubmoduleData::compute(gens);

    // every returned syzygy is an exact relation
    for (const auto& s : S.syzygies()) {
        FreeModuleElem acc(2, 2);
        for (int i = 0; i < 4; ++i) acc += s[static_cast<std::size_t>(i)] * gens[static_cast<std::size_t>(i)];
        CHECK(acc.is_zero());
    }

    // the two Koszul relations lie in the span of the returned generators
    std::vector<FreeModuleElem> syz_elems;
    for (const auto& s : S.syzygies()) syz_elems.push_back(FreeModuleElem(s));
    REQUIRE_FALSE(syz_elems.empty());
    SubmoduleData syz_mod = SubmoduleData::compute(syz_elems);
    FreeModuleElem koszul1({X(2, 1), -X(2, 0), Poly(2), Poly(2)});
    FreeModuleElem koszul2({Poly(2), Poly(2), X(2, 1), -X(2, 0)});
    CHECK(syz_mod.contains(koszul1));
    CHECK(syz_mod.contains(koszul2));

    // completeness against the degree-bounded brute-force oracle
    for (const auto& bf : brute_force_syzygies(gens, 3))
        CHECK(syz_mod.contains(FreeModuleElem(bf)));
}

TEST_CASE("torsion-free cases have no syzygies") {
    Poly x2 = X(1, 0) * X(1, 0);
    CHECK(SubmoduleData::compute({FreeModuleElem({x2})}).syzygies().empty());
    Poly one = Poly::constant(2, rat(1));
    std::vector<FreeModuleElem> gens{elem2(one, Poly(2)), elem2(Poly(2), X(2, 0))};
    CHECK(SubmoduleData::compute(gens).syzygies().empty());
    // and the brute-force oracle agrees
    CHECK(brute_force_syzygies(gens, 3).empty());
}

TEST_CASE("division correctness on random sections") {
    std::mt19937_64 rng(7);
    std::vector<FreeModuleElem> gens{elem2(X(2, 0), X(2, 1) * X(2, 1)),
                                     elem2(X(2, 1), Poly::constant(2, rat(1, 2))),
                                     elem2(X(2, 0) * X(2, 1), Poly(2))};
    SubmoduleData S = SubmoduleData::compute(gens);
    for (int it = 0; it < 1000; ++it) {
        FreeModuleElem e = random_elem(rng, 2, 2, 3);
        NormalFormResult nf = S.normal_form(e);
        FreeModuleElem rebuilt = nf.remainder;
        for (int i = 0; i < S.generator_count(); ++i)
            rebuilt += nf.certificate[static_cast<std::size_t>(i)] * gens[static_cast<std::size_t>(i)];
        CHECK(rebuilt == e);
    }
}

TEST_CASE("membership soundness: members rebuild from the certificate alone") {
    std::mt19937_64 rng(11);
    std::vector<FreeModuleElem> gens{elem2(X(2, 0), Poly(2)), elem2(Poly(2), X(2, 1)),
                                     elem2(X(2, 1), X(2, 0))};
    SubmoduleData S = SubmoduleData::compute(gens);
    for (int it = 0; it < 200; ++it) {
        // random member: polynomial combination of the generators
        FreeModuleElem member(2, 2);
        for (const auto& g : gens) member += random_poly(rng, 2, 2) * g;
        NormalFormResult nf = S.normal_form(member);
        REQUIRE(nf.member());
        FreeModuleElem rebuilt(2, 2);
        for (int i = 0; i < S.generator_count(); ++i)
            rebuilt += nf.certificate[static_cast<std::size_t>(i)] * gens[static_cast<std::size_t>(i)];
        CHECK(rebuilt == member);
    }
}

TEST_CASE("lift matrix reproduces the Groebner basis and generators reduce to zero") {
    std::mt19937_64 rng(13);
    std::vector<FreeModuleElem> gens;
    for (int i = 0; i < 4; ++i) gens.push_back(random_elem(rng, 2, 2, 2));
    SubmoduleData S = SubmoduleData::compute(gens);
    for (std::size_t j = 0; j < S.groebner().size(); ++j) {
        FreeModuleElem rebuilt(2, 2);
        for (int i = 0; i < S.generator_count(); ++i)
            rebuilt += S.lift()[j][static_cast<std::size_t>(i)] * gens[static_cast<std::size_t>(i)];
        CHECK(rebuilt == S.groebner()[j]);
    }
    for (const auto& g : gens) CHECK(S.contains(g));
    for (const auto& s : S.syzygies()) {
        FreeModuleElem acc(2, 2);
        for (int i = 0; i < S.generator_count(); ++i)
            acc += s[static_cast<std::size_t>(i)] * gens[static_cast<std::size_t>(i)];
        CHECK(acc.is_zero());
    }
}

TEST_CASE("Buchberger idempotence on the reduced basis") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 5; ++round) {
        std::vector<FreeModuleElem> gens;
        for (int i = 0; i < 3; ++i) gens.push_back(random_elem(rng, 2, 2, 2));
        bool nonzero = false;
        for (auto& g : gens) nonzero = nonzero || !g.is_zero();
        if (!nonzero) continue;
        SubmoduleData S = SubmoduleData::compute(gens);
        if (S.groebner().empty()) continue;
        SubmoduleData S2 = SubmoduleData::compute(S.groebner());
        CHECK(S2.groebner() == S.groebner());
    }
}

TEST_CASE("degree guard aborts loudly") {
    GroebnerOptions tight;
    tight.degree_guard = 1;
    Poly x = X(2, 0), y = X(2, 1);
    // leading terms collide in position 0 and force an S-pair of degree 3
    std::vector<FreeModuleElem> gens{elem2(x * x, y), elem2(x * y, x)};
    CHECK_THROWS_AS(SubmoduleData::compute(gens, tight), DegreeGuardError);
}

TEST_CASE("zero generators produce unit syzygies") {
    SubmoduleData S = SubmoduleData::compute({FreeModuleElem(2, 2)});
    CHECK(S.is_zero_module());
    REQUIRE(S.syzygies().size() == 1);
    CHECK(S.syzygies()[0][0] == Poly::constant(2, rat(1)));
}

TEST_CASE("membership agrees with brute-force linear algebra on random modules") {
    std::mt19937_64 rng(97);
    // solvability of e = sum q_i g_i with deg(q_i) <= D, by exact linear algebra
    auto brute_member = [](const std::vector<FreeModuleElem>& gens, const FreeModuleElem& e,
                           int max_deg) {
        const int k = static_cast<int>(gens.size());
        const int nvars = e.nvars();
        const int rank = e.rank();
        std::vector<Exponents> monos;
        enumerate_monomials(nvars, max_deg, monos);
        const int M = static_cast<int>(monos.size());
        int out_deg = max_deg;
        for (const auto& g : gens) out_deg = std::max(out_deg, max_deg + g.degree());
        out_deg = std::max(out_deg, e.degree());
        std::vector<Exponents> out_monos;
        enumerate_monomials(nvars, out_deg, out_monos);
        std::map<Exponents, int, GrevlexLess> out_index;
        for (std::size_t i = 0; i < out_monos.size(); ++i)
            out_index[out_monos[i]] = static_cast<int>(i);
        const int rows = rank * static_cast<int>(out_monos.size());
        RatMat system = rat_mat(rows, k * M);
        for (int j = 0; j < k; ++j)
            for (int t = 0; t < M; ++t)
                for (int c = 0; c < rank; ++c)
                    for (const auto& [exps, coeff] : gens[static_cast<std::size_t>(j)][c].terms()) {
                        int row = c * static_cast<int>(out_monos.size()) +
                                  out_index.at(exp_add(monos[static_cast<std::size_t>(t)], exps));
                        system[row][j * M + t] += coeff;
                    }
        RatVec rhs(rows, Rat(0));
        for (int c = 0; c < rank; ++c)
            for (const auto& [exps, coeff] : e[c].terms())
                rhs[c * static_cast<int>(out_monos.size()) + out_index.at(exps)] = coeff;
        RatVec sol;
        return solve(system, rhs, sol);
    };

    for (int round = 0; round < 12; ++round) {
        std::vector<FreeModuleElem> gens;
        for (int i = 0; i < 3; ++i) gens.push_back(random_elem(rng, 2, 2, 2));
        bool any = false;
        for (const auto& g : gens) any = any || !g.is_zero();
        if (!any) continue;
        SubmoduleData S = SubmoduleData::compute(gens);
        for (int it = 0; it < 6; ++it) {
            FreeModuleElem e = random_elem(rng, 2, 2, 2);
            bool nf_member = S.contains(e);
            bool bf_member = brute_member(gens, e, e.degree() + 3);
            if (bf_member) CHECK(nf_member);  // low-degree solvable implies member
            if (nf_member) {
                // certified members rebuild exactly (checked elsewhere); brute force must find
                // them once the degree bound covers the certificate
                NormalFormResult nf = S.normal_form(e);
                int cert_deg = 0;
                for (const auto& q : nf.certificate) cert_deg = std::max(cert_deg, q.degree());
                CHECK(brute_member(gens, e, std::max(cert_deg, 0)));
            }
        }
    }
}

TEST_CASE("the reduced basis is fully reduced and monic") {
    std::mt19937_64 rng(89);
    for (int round = 0; round < 8; ++round) {
        std::vector<FreeModuleElem> gens;
        for (int i = 0; i < 3; ++i) gens.push_back(random_elem(rng, 2, 2, 2));
        bool any = false;
        for (const auto& g : gens) any = any || !g.is_zero();
        if (!any) continue;
        SubmoduleData S = SubmoduleData::compute(gens);
        const auto& gb = S.groebner();
        for (std::size_t i = 0; i < gb.size(); ++i) {
            auto lt = leading_term(gb[i]);
            REQUIRE(lt.has_value());
            CHECK(lt->coeff == 1);
            for (std::size_t j = 0; j < gb.size(); ++j) {
                if (i == j) continue;
                auto ltj = leading_term(gb[j]);
                // no term of gb[i] is divisible by the leading term of gb[j]
                for (const auto& [mono, c] : gb[i][ltj->pos].terms())
                    CHECK_FALSE(exp_divides(ltj->mono, mono));
            }
        }
    }
}
