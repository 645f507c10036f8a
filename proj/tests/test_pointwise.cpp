#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "folia/errors.hpp"
#include "folia/parser.hpp"
#include "folia/pointwise.hpp"
#include "test_util.hpp"

using namespace folia;
using namespace folia::testutil;

namespace {

SingularSubalgebroid load(const std::string& name) { return load_subalgebroid(data_path(name)); }

Poly X(int nvars, int i) { return Poly::variable(nvars, i); }

}  // namespace

TEST_CASE("fiber dimensions of <x^2 dx>") {
    SingularSubalgebroid B = load("x2dx.sfo");
    FiberReport at0 = fiber_report(B, {rat(0)});
    CHECK(at0.dim_ev == 0);
    CHECK(at0.dim_isotropy == 1);
    CHECK(at0.dim_fiber == 1);
    CHECK(at0.structure_constants.empty());  // abelian isotropy

    FiberReport at1 = fiber_report(B, {rat(1)});
    CHECK(at1.dim_ev == 1);
    CHECK(at1.dim_isotropy == 0);
    CHECK(at1.dim_fiber == 1);
}

TEST_CASE("fiber dimensions of the vanishing-at-origin module") {
    SingularSubalgebroid B = load("vanish_origin.sfo");
    FiberReport at0 = fiber_report(B, {rat(0), rat(0)});
    CHECK(at0.dim_fiber == 4);
    CHECK(at0.dim_ev == 0);
    CHECK(at0.dim_isotropy == 4);

    FiberReport off = fiber_report(B, {rat(1), rat(0)});
    CHECK(off.dim_fiber == 2);
    CHECK(off.dim_ev == 2);
    CHECK(off.dim_isotropy == 0);
}

TEST_CASE("isotropy at the origin is gl(2) via the matrix-commutator oracle") {
    SingularSubalgebroid B = load("vanish_origin.sfo");
    FiberReport rep = fiber_report(B, {rat(0), rat(0)});
    REQUIRE(rep.dim_isotropy == 4);
    CHECK(rep.jacobi_ok);

    // the isotropy classes are the generator classes x dx, y dx, x dy, y dy, i.e. the linear
    // vector fields of E11, E12, E21, E22; A -> (Ax).d is an anti-isomorphism, so the projected
    // bracket must match the reversed matrix commutator expanded in the E-basis
    std::vector<RatMat> basis(4, rat_mat(2, 2));
    basis[0][0][0] = 1;  // E11 <-> x dx
    basis[1][0][1] = 1;  // E12 <-> y dx
    basis[2][1][0] = 1;  // E21 <-> x dy
    basis[3][1][1] = 1;  // E22 <-> y dy

    // sanity: the report's class vectors are the generator classes in order
    REQUIRE(rep.isotropy_classes.size() == 4);
    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 4; ++i) CHECK(rep.isotropy_classes[a][i] == (a == i ? 1 : 0));

    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            RatMat comm = rat_commutator(basis[b], basis[a]);
            for (int k = 0; k < 4; ++k) {
                Rat expect = comm[k / 2][k % 2];  // coefficient of E_{(k/2)+1,(k%2)+1}
                CHECK(rep.structure_constant(a, b, k) == expect);
            }
        }
}

TEST_CASE("projectivity scans") {
    SUBCASE("hypersurface module is projective of rank 2") {
        SingularSubalgebroid B = load("hypersurface.sfo");
        std::vector<RatVec> pts{{rat(0), rat(0)}, {rat(1), rat(0)}, {rat(0), rat(2)},
                                {rat(-1), rat(1, 2)}, {rat(3), rat(-2)}};
        ProjectivityReport rep = projectivity_scan(B, pts);
        CHECK(rep.verdict == ProjectivityReport::Verdict::Projective);
        CHECK(rep.rank == 2);
        CHECK(rep.smoothness_verdict.find("Lie groupoid") != std::string::npos);
    }
    SUBCASE("codimension-2 case is not projective") {
        SingularSubalgebroid B = load("vanish_origin.sfo");
        ProjectivityReport rep = projectivity_scan(B, {{rat(0), rat(0)}, {rat(1), rat(0)}});
        CHECK(rep.verdict == ProjectivityReport::Verdict::NonProjective);
        CHECK(rep.dims[0] == 4);
        CHECK(rep.dims[1] == 2);
    }
    SUBCASE("rotation module is projective of rank 1") {
        SingularSubalgebroid B = load("rotation.sfo");
        std::vector<RatVec> pts{{rat(0), rat(0)}, {rat(1), rat(0)}, {rat(2), rat(-3)}};
        ProjectivityReport rep = projectivity_scan(B, pts);
        CHECK(rep.verdict == ProjectivityReport::Verdict::Projective);
        CHECK(rep.rank == 1);
    }
}

TEST_CASE("local generator checks") {
    SUBCASE("single generator at its singular point") {
        SingularSubalgebroid B = load("xdx.sfo");
        LocalGeneratorsReport rep =
            local_generators_check(B, {rat(0)}, {B.generators()[0]}, {{rat(1)}, {rat(-2)}});
        CHECK(rep.basis_at_base);
        CHECK(rep.global_generation);
        CHECK(rep.pass());
    }
    SUBCASE("hypersurface generators stay a basis on and off N") {
        SingularSubalgebroid B = load("hypersurface.sfo");
        std::vector<RatVec> probes{{rat(0), rat(0)}, {rat(1), rat(0)}, {rat(0), rat(1)},
                                   {rat(-2), rat(3)}};
        LocalGeneratorsReport rep = local_generators_check(
            B, {rat(0), rat(0)}, {B.generators()[0], B.generators()[1]}, probes);
        CHECK(rep.pass());
        for (const auto& [p, ok] : rep.probe_basis) CHECK(ok);
    }
    SUBCASE("x dx, x dy give fiber basis at (1,0) but fail global generation") {
        SingularSubalgebroid B = load("vanish_origin.sfo");
        std::vector<FreeModuleElem> candidates{B.generators()[0], B.generators()[2]};
        LocalGeneratorsReport rep = local_generators_check(B, {rat(1), rat(0)}, candidates, {});
        CHECK(rep.basis_at_base);
        CHECK_FALSE(rep.global_generation);
        CHECK_FALSE(rep.pass());
    }
    SUBCASE("precondition: candidates must be a fiber basis") {
        SingularSubalgebroid B = load("vanish_origin.sfo");
        CHECK_THROWS_AS(
            local_generators_check(B, {rat(0), rat(0)}, {B.generators()[0]}, {}),
            InputError);
    }
}

TEST_CASE("leaf rank reports") {
    SUBCASE("rotation module on the unit circle") {
        SingularSubalgebroid B = load("rotation.sfo");
        std::vector<RatVec> circle{{rat(1), rat(0)}, {rat(0), rat(1)}, {rat(-1), rat(0)},
                                   {rat(3, 5), rat(4, 5)}, {rat(-4, 5), rat(3, 5)}};
        LeafRankReport rep = leaf_rank_report(B, circle);
        CHECK(rep.consistent());
        CHECK(rep.rank_BL == 1);
        CHECK(rep.rank_fiberwise == 1);
    }
    SUBCASE("rotation module at the origin leaf") {
        SingularSubalgebroid B = load("rotation.sfo");
        LeafRankReport rep = leaf_rank_report(B, {{rat(0), rat(0)}});
        CHECK(rep.rank_BL == 0);
        CHECK(rep.rank_fiberwise == 1);
    }
    SUBCASE("x^2 dx on the positive leaf") {
        SingularSubalgebroid B = load("x2dx.sfo");
        LeafRankReport rep = leaf_rank_report(B, {{rat(1)}, {rat(2)}, {rat(1, 2)}});
        CHECK(rep.consistent());
        CHECK(rep.rank_BL == 1);
        CHECK(rep.rank_fiberwise == 1);
    }
    SUBCASE("mixed samples are flagged with the offending pair") {
        SingularSubalgebroid B = load("rotation.sfo");
        LeafRankReport rep = leaf_rank_report(B, {{rat(1), rat(0)}, {rat(0), rat(0)}});
        CHECK_FALSE(rep.consistent());
        CHECK(rep.offending_a == 0);
        CHECK(rep.offending_b == 1);
    }
}

TEST_CASE("pair-groupoid pullback dimension checks") {
    SUBCASE("x^2 dx at (0, 3)") {
        PullbackDimReport rep = pullback_dim_check(load("x2dx.sfo"), {rat(0)}, {rat(3)});
        CHECK(rep.dim_base == 1);
        CHECK(rep.dim_pullback == 1);
        CHECK(rep.pass());
    }
    SUBCASE("vanishing-at-origin module at ((0,0),(1,1))") {
        PullbackDimReport rep = pullback_dim_check(load("vanish_origin.sfo"),
                                                   {rat(0), rat(0)}, {rat(1), rat(1)});
        CHECK(rep.dim_base == 4);
        CHECK(rep.dim_pullback == 4);
    }
    SUBCASE("generic point of the hypersurface module") {
        PullbackDimReport rep = pullback_dim_check(load("hypersurface.sfo"),
                                                   {rat(2), rat(1)}, {rat(0), rat(0)});
        CHECK(rep.dim_base == 2);
        CHECK(rep.dim_pullback == 2);
    }
}

TEST_CASE("short exact sequence identity at random rational points") {
    std::mt19937_64 rng(31);
    for (const char* name : {"x2dx.sfo", "rotation.sfo", "vanish_origin.sfo", "hypersurface.sfo"}) {
        SingularSubalgebroid B = load(name);
        const int n = B.ambient().nvars();
        for (int it = 0; it < 100; ++it) {
            RatVec x;
            for (int i = 0; i < n; ++i) x.push_back(random_rat(rng));
            FiberReport rep = fiber_report(B, x);
            CHECK(rep.dim_fiber == rep.dim_ev + rep.dim_isotropy);
            CHECK(rep.jacobi_ok);
        }
    }
}

TEST_CASE("fiber dimension is independent of the generating set") {
    std::mt19937_64 rng(37);
    SingularSubalgebroid B = load("vanish_origin.sfo");
    const auto& gens = B.generators();
    // unimodular recombination (triangular with unit diagonal) plus a redundant element
    std::vector<FreeModuleElem> recombined;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        FreeModuleElem e = gens[i];
        for (std::size_t j = 0; j < i; ++j) e += random_poly(rng, 2, 1) * gens[j];
        recombined.push_back(e);
    }
    FreeModuleElem redundant(2, 2);
    for (const auto& g : gens) redundant += random_poly(rng, 2, 1) * g;
    recombined.push_back(redundant);
    SingularSubalgebroid B2(B.ambient(), recombined);

    for (int it = 0; it < 20; ++it) {
        RatVec x{random_rat(rng), random_rat(rng)};
        CHECK(fiber_dimension(B, x) == fiber_dimension(B2, x));
    }
}

TEST_CASE("upper semicontinuity at the special points") {
    SingularSubalgebroid a = load("x2dx.sfo");
    int at0 = fiber_dimension(a, {rat(0)});
    for (long p : {1L, -1L, 3L})
        CHECK(at0 >= fiber_dimension(a, {rat(p, 100)}));

    SingularSubalgebroid b = load("vanish_origin.sfo");
    int bt0 = fiber_dimension(b, {rat(0), rat(0)});
    for (long p : {1L, -2L, 5L})
        CHECK(bt0 >= fiber_dimension(b, {rat(p, 100), rat(-p, 50)}));
}

TEST_CASE("irrational points are rejected at the exact layer by construction") {
    // rational-only API: a dimension mismatch or malformed rational is an input error
    SingularSubalgebroid B = load("rotation.sfo");
    CHECK_THROWS_AS(fiber_report(B, {rat(1)}), InputError);
    CHECK_THROWS_AS(rat_from_string("1.414"), InputError);
}
