#include "doctest.h"

#include "cf/errors.hpp"
#include "cf/hopf.hpp"
#include "cf/invariants.hpp"

using namespace cf;

namespace {

DiskMap degree(int d) {
    return [d](double r, double a) { return default_g(r, d * a); };
}

// Third tube wide enough for a degree-one disk map.
HopfConfig three_tube_config() {
    HopfConfig cfg;
    cfg.third_tube = true;
    cfg.k = 20;
    cfg.third_w = 8;
    cfg.third_l0 = 6;
    cfg.third_j0 = 4;
    return cfg;
}

}  // namespace

TEST_CASE("Hopf example: variation and closed sum agree") {
    auto d = hopf_demo({}, 1);
    CHECK(d.variation == Q(-8));
    CHECK(d.closed_sum == d.variation);
    REQUIRE(d.class1.size() == 1);
    REQUIRE(d.class2.size() == 1);
    // -2 lk of two cores carrying twice a degree-one disk each
    CHECK(abs(d.class1[0]) == 2);
    CHECK(abs(d.class2[0]) == 2);
}

TEST_CASE("p1 differences are antisymmetric and additive") {
    HopfConfig cfg;
    cfg.n = 12;
    cfg.k = 8;
    cfg.a = 3;
    auto ex = hopf_example(cfg);
    const auto& M = ex.hm.mesh;
    std::vector<LPSurgeryDatum> data{ex.d1, ex.d2};
    Combing X1 = surgered_combing_in_place(M, ex.X, data, {0});
    Combing X12 = surgered_combing_in_place(M, ex.X, data, {0, 1});
    Q a = p1_diff(M, ex.X, X1, 1), b = p1_diff(M, X1, ex.X, 1);
    CHECK(a == -b);
    Q c = p1_diff(M, X1, X12, 2), e = p1_diff(M, ex.X, X12, 3);
    CHECK(a + c == e);
    CHECK(p1_diff(M, ex.X, ex.X, 4) == 0);
    CHECK(homotopy_predicate(M, X1, X1, 5));
}

TEST_CASE("p1 difference needs torsion combings") {
    auto st = solid_torus(8, 4);
    auto base = constant_combing(st.mesh, Vec3(1, 0, 0));
    auto Y = example_tube_combing(st.mesh, tube_chart(st), base);
    CHECK_THROWS_WITH_AS(p1_diff(st.mesh, base, Y, 1), doctest::Contains("NotTorsion"), Error);
}

TEST_CASE("variation is bilinear in the disk degrees") {
    HopfConfig cfg;
    for (auto [a, b] : std::vector<std::pair<int, int>>{{1, -1}, {2, 1}, {-1, -1}}) {
        CAPTURE(a);
        CAPTURE(b);
        auto ex = hopf_example(cfg, degree(a), degree(b));
        CHECK(second_order_variation(ex.hm.mesh, ex.X, ex.d1, ex.d2, 1) == Q(-8 * a * b));
    }
}

TEST_CASE("second-order variation is unchanged by a third surgery") {
    auto cfg = three_tube_config();
    const int cases[][3] = {{1, 1, 1}, {1, -1, 1}, {2, 1, 1}, {1, 1, -1}, {-1, 2, 1}};
    for (const auto& c : cases) {
        CAPTURE(c[0]);
        CAPTURE(c[1]);
        CAPTURE(c[2]);
        auto ex = hopf_example(cfg, degree(c[0]), degree(c[1]), degree(c[2]));
        auto r = finite_type_check(ex.hm.mesh, ex.X, ex.d1, ex.d2, *ex.d3, 1);
        CHECK(r.variation_before == Q(-8 * c[0] * c[1]));
        CHECK(r.value == 0);
        REQUIRE(r.closed_value.has_value());
        CHECK(*r.closed_value == 0);
    }
}

TEST_CASE("finite-type check with the roles of the tubes permuted") {
    auto cfg = three_tube_config();
    auto ex = hopf_example(cfg, default_g, default_g, DiskMap(default_g));
    const auto& M = ex.hm.mesh;
    // The third tube runs parallel to the first core: it links the second core only.
    CHECK(second_order_variation(M, ex.X, ex.d1, *ex.d3, 1) == 0);
    auto r = finite_type_check(M, ex.X, ex.d2, *ex.d3, ex.d1, 3);
    CHECK(r.variation_before == Q(-8));
    CHECK(r.value == 0);
    r = finite_type_check(M, ex.X, ex.d1, *ex.d3, ex.d2, 2);
    CHECK(r.value == 0);
}
