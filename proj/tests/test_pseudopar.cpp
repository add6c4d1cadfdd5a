#include "doctest.h"

#include <cmath>

#include "cf/errors.hpp"
#include "cf/linking.hpp"
#include "cf/pseudopar.hpp"

using namespace cf;

namespace {

const PseudoParModel& model() {
    static PseudoParModel m = build_model({});
    return m;
}

}  // namespace

TEST_CASE("theta profile") {
    const auto& m = model();
    CHECK(m.theta(0) == doctest::Approx(0));
    CHECK(m.theta(1) == doctest::Approx(M_PI));
    CHECK(m.theta(-1) == doctest::Approx(-M_PI));
    CHECK(m.theta(0.9) == doctest::Approx(M_PI));
    for (double u : {0.1, 0.3, 0.55}) CHECK(m.theta(-u) == doctest::Approx(-m.theta(u)));
    // T is a rotation about e1
    Mat3 T = m.T(0.3);
    CHECK((T * Vec3(1, 0, 0) - Vec3(1, 0, 0)).norm() < 1e-12);
    CHECK((T * T.transpose() - Mat3::Identity()).norm() < 1e-12);
}

TEST_CASE("boundary loop lifts, the corrupted one does not") {
    CHECK(lift_holonomy({}) == 1);
    PseudoParConfig bad;
    bad.corrupt = true;
    CHECK(lift_holonomy(bad) == -1);
    CHECK_THROWS_WITH_AS(build_model(bad), doctest::Contains("LiftObstruction"), Error);
}

TEST_CASE("relaxed frame matches its prescribed collar") {
    const auto& m = model();
    CHECK(m.residual < 1e-8);
    const auto& c = m.cfg;
    // |u| >= 1 - eps: identity
    for (double t : {0.0, 0.4, 1.0}) CHECK(std::abs(std::abs(m.F_at(t, 1.0).w()) - 1) < 1e-9);
    // left collar: R(pi + theta) about e1
    for (double u : {-0.5, 0.0, 0.35}) {
        Mat3 R = m.F_at(c.a, u).toRotationMatrix();
        Mat3 want = Eigen::AngleAxisd(M_PI + m.theta(u), Vec3::UnitX()).toRotationMatrix();
        CHECK((R - want).norm() < 1e-9);
    }
}

TEST_CASE("meridian degrees of the Siamese sections") {
    CHECK(meridian_degree(model(), 'd') == 1);
    CHECK(meridian_degree(model(), 'g') == -1);
}

TEST_CASE("Euler classes of the Siamese sections in a solid torus") {
    const auto& m = model();
    auto h = solid_torus_host(m, 16, 4, 2);
    CHECK(validate_manifold(h.mesh).ok());
    auto hom = homology_of(h.mesh);
    REQUIRE(hom->rank1() == 1);
    Q g = hom->coords(h.gamma)[0];
    CHECK(abs(g) == 1);
    auto s = siamese_sections(m, h);
    Q ed = hom->coords(snap_to_cycle(h.mesh, euler_zero_chain(h.mesh, s.d, 1)))[0];
    Q eg = hom->coords(snap_to_cycle(h.mesh, euler_zero_chain(h.mesh, s.g, 1)))[0];
    CHECK(ed == g);
    CHECK(eg == -g);
    // one exceptional parallel, read off the grid and found again on the host
    auto ex = exceptional_params(m);
    REQUIRE(ex.size() == 1);
    auto L = exceptional_link(m, h, 1);
    CHECK(L.loops.size() == 1);
    CHECK(hom->coords(snap_to_cycle(h.mesh, L))[0] == ex[0].orientation * g);
}

TEST_CASE("bracket is unchanged along homotopies") {
    const auto& m = model();
    auto h = s3_host(m, 16, 24);
    auto X = model_combing(m, h);
    BracketInfo b0;
    Q ref = pseudopar_bracket(m, h, X, 1, &b0);
    bool nontrivial = false;
    int runs = 0;
    for (uint64_t seed : {2u, 3u, 4u, 5u, 6u}) {
        CAPTURE(seed);
        auto Y = bump_homotopy(m, h, X, seed, 2.5);
        BracketInfo bi;
        Q b = pseudopar_bracket(m, h, Y, 1, &bi);
        CHECK(b == ref);
        nontrivial = nontrivial || bi.lk != b0.lk || bi.correction != b0.correction;
        ++runs;
    }
    CHECK(runs == 5);
    CHECK(nontrivial);
}
