#include <doctest.h>

#include <random>

#include "cf/combing.hpp"
#include "cf/errors.hpp"
#include "cf/generators.hpp"

using namespace cf;

TEST_CASE("constant combing on a solid torus is valid") {
    auto st = solid_torus(3, 4);
    auto X = constant_combing(st.mesh, Vec3(0, 0, 2));
    CHECK(validate_combing(st.mesh, X).ok());
    for (const auto& v : X.vec) CHECK(v.isApprox(Vec3(0, 0, 1)));
    for (const auto& [v, s] : X.sigma) {
        CHECK(std::abs(s.norm() - 1) < 1e-12);
        CHECK(std::abs(s.dot(X.vec[v])) < 1e-12);
    }
}

TEST_CASE("validate_combing reports bad vectors and sections") {
    auto st = solid_torus(2, 3);
    auto X = constant_combing(st.mesh, Vec3(1, 0, 0));
    X.vec[0] *= 2;
    auto D = validate_combing(st.mesh, X);
    CHECK_FALSE(D.ok());
    X = constant_combing(st.mesh, Vec3(1, 0, 0));
    X.sigma.begin()->second = Vec3(1, 0, 0);
    CHECK_FALSE(validate_combing(st.mesh, X).ok());
    X = constant_combing(st.mesh, Vec3(1, 0, 0));
    X.sigma.erase(X.sigma.begin());
    CHECK_FALSE(validate_combing(st.mesh, X).ok());
    X.vec.pop_back();
    CHECK_FALSE(validate_combing(st.mesh, X).ok());
}

TEST_CASE("zero vector is refused") {
    auto st = solid_torus(2, 3);
    CHECK_THROWS_AS(constant_combing(st.mesh, Vec3::Zero()), Error);
}

TEST_CASE("region conversions round trip through transitions") {
    auto hm = hopf_s3({8, 6, 2});
    const auto& m = hm.mesh;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> G(0, 1);
    Mat3 R = axis_rotation(Vec3(1, 2, 3).normalized(), 0.7);
    FramedMesh twisted = m;
    int ext = m.region_index("ext"), a1 = m.region_index("A1");
    (void)ext;
    (void)a1;
    for (int v = 0; v < m.num_vertices; ++v) twisted.transitions.push_back({v, "A1", "ext", R});
    twisted.finalize();
    std::vector<Vec3> f(m.num_vertices);
    for (auto& x : f) x = Vec3(G(rng), G(rng), G(rng));
    const auto& t = twisted.topo();
    for (int v = 0; v < twisted.num_vertices; ++v) {
        for (int r = 0; r < static_cast<int>(t.region_names.size()); ++r) {
            Vec3 y = in_region(twisted, f, v, r);
            CHECK((to_home(twisted, y, v, r) - f[v]).norm() < 1e-12);
        }
    }
}

TEST_CASE("default disk map: -e1 at the center, e1 on the boundary") {
    CHECK(default_g(0, 0.3).isApprox(Vec3(-1, 0, 0)));
    CHECK(default_g(1, 2.0).isApprox(Vec3(1, 0, 0)));
    for (double r : {0.1, 0.5, 0.9})
        for (double a : {0.0, 1.0, 4.0}) CHECK(std::abs(default_g(r, a).norm() - 1) < 1e-12);
}

TEST_CASE("axis_rotation is a rotation about its axis") {
    Vec3 ax = Vec3(1, -1, 2).normalized();
    Mat3 R = axis_rotation(ax, 1.1);
    CHECK((R * R.transpose() - Mat3::Identity()).norm() < 1e-12);
    CHECK(std::abs(R.determinant() - 1) < 1e-12);
    CHECK((R * ax - ax).norm() < 1e-12);
    Vec3 p = ax.unitOrthogonal();
    CHECK(std::abs(std::acos(p.dot(R * p)) - 1.1) < 1e-9);
}

TEST_CASE("perturb_pair keeps a generic pair and moves a coincident one") {
    auto st = solid_torus(4, 4);
    auto X = constant_combing(st.mesh, Vec3(1, 0, 0));
    auto Y = example_tube_combing(st.mesh, tube_chart(st), X);
    auto r = perturb_pair(st.mesh, X, Y, 1);
    CHECK(r.retries >= 0);
    // X against itself has a 3-dimensional coincidence set: it must be moved.
    auto s = perturb_pair(st.mesh, X, X, 1);
    double moved = 0;
    for (int v = 0; v < st.mesh.num_vertices; ++v) moved = std::max(moved, (s.Y.vec[v] - X.vec[v]).norm());
    CHECK(moved > 0);
    for (int v = 0; v < st.mesh.num_vertices; ++v)
        if (st.mesh.topo().boundary_vertex[v]) CHECK(s.Y.vec[v] == X.vec[v]);
}
