#include "doctest.h"

#include "cf/errors.hpp"
#include "cf/generators.hpp"
#include "cf/homology.hpp"

#include <random>

using namespace cf;

TEST_CASE("betti numbers of standard pieces") {
    struct Case {
        const char* name;
        FramedMesh m;
        std::array<int, 4> b;
    };
    std::vector<Case> cases;
    cases.push_back({"tet", single_tet(), {1, 0, 0, 0}});
    cases.push_back({"S3", two_tet_s3(), {1, 0, 0, 1}});
    cases.push_back({"solid torus", solid_torus(2, 4).mesh, {1, 1, 0, 0}});
    cases.push_back({"genus 2", genus2_handlebody(), {1, 2, 0, 0}});
    cases.push_back({"S2xS1", s2_x_s1(3).mesh, {1, 1, 1, 1}});
    cases.push_back({"hopf S3", hopf_s3({8, 6, 2}).mesh, {1, 0, 0, 1}});
    for (auto& c : cases) {
        CAPTURE(c.name);
        auto h = homology_of(c.m);
        for (int k = 0; k < 4; ++k) CHECK(h->betti(k) == c.b[k]);
        // Euler characteristic from cell counts
        int chi = c.m.num_vertices - c.m.num_edges() + c.m.num_faces() - c.m.num_tets();
        CHECK(h->euler_characteristic() == chi);
    }
}

TEST_CASE("cocycles are dual to the H1 basis") {
    auto m = genus2_handlebody();
    auto h = homology_of(m);
    const auto& z = h->h1_basis();
    const auto& phi = h->h1_cocycles();
    REQUIRE(z.size() == 2);
    for (size_t i = 0; i < phi.size(); ++i)
        for (size_t j = 0; j < z.size(); ++j) {
            Q s = 0;
            for (const auto& [e, v] : z[j]) {
                auto it = phi[i].find(e);
                if (it != phi[i].end()) s += v * it->second;
            }
            CHECK(s == Q(i == j ? 1 : 0));
        }
}

TEST_CASE("longitude generates H1 of the solid torus, meridian bounds") {
    auto st = solid_torus(2, 4);
    auto h = homology_of(st.mesh);
    auto lon = edge_loop(st.mesh, st.longitude_loop(1, 1));
    auto mer = edge_loop(st.mesh, st.meridian_loop(0));
    auto c = h->coords(lon);
    REQUIRE(c.size() == 1);
    CHECK(abs(c[0]) == 1);
    CHECK(h->is_boundary(mer));
    auto s = h->bounding_chain(mer);
    REQUIRE(s.has_value());
    CHECK(boundary(h->complex(), 2, *s) == mer);
    // longitude + (-longitude shifted) bounds
    auto lon2 = edge_loop(st.mesh, st.longitude_loop(0, 2));
    CHECK(h->is_boundary(chain_sum(lon, lon2, Q(-1))));
    CHECK(!h->is_boundary(lon));
    CHECK_THROWS_AS(h->coords(Chain{{0, Q(1)}}), Error);
}

TEST_CASE("boundary torus intersection form") {
    auto st = solid_torus(1, 4);
    auto surf = boundary_surface(st.mesh);
    Homology hs(surf.cx);
    CHECK(hs.betti(1) == 2);
    auto Qf = intersection_form(hs);
    // antisymmetric and unimodular
    CHECK(Qf[0][0] == 0);
    CHECK(Qf[0][1] == -Qf[1][0]);
    CHECK(abs(Qf[0][1]) == 1);
    auto to_surf = [&](const Chain& c) {
        Chain out;
        for (const auto& [e, v] : c) out[surf.edge_index.at(e)] = v;
        return out;
    };
    auto mer = to_surf(edge_loop(st.mesh, st.meridian_loop(0)));
    auto lon = to_surf(edge_loop(st.mesh, st.longitude_loop(0, 0)));
    // meridian = oriented boundary of the disk, longitude along the core:
    // for a positively oriented D^2 x S^1 the boundary torus has <m, l> = +1
    CHECK(intersection_number(hs, mer, lon) == 1);
    CHECK(intersection_number(hs, lon, mer) == -1);
}

TEST_CASE("lagrangians") {
    auto st = solid_torus(1, 4);
    auto L = lagrangian_of(st.mesh);
    CHECK(L.basis.size() == 1);
    auto g2 = lagrangian_of(genus2_handlebody());
    CHECK(g2.basis.size() == 2);
    auto r = is_qhh(s2_x_s1(3).mesh);
    CHECK(!r.ok);
    CHECK_THROWS_AS(lagrangian_of(s2_x_s1(3).mesh), Error);
    // the Lagrangian is isotropic
    auto surf = boundary_surface(genus2_handlebody());
    Homology hs(surf.cx);
    for (auto& a : g2.cycles)
        for (auto& b : g2.cycles) CHECK(intersection_number(hs, a, b) == 0);
}

TEST_CASE("dense inverse and sparse solve against direct products") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> U(-4, 4);
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 2 + rep % 4;
        DenseQ a = dense_zero(n, n);
        for (auto& r : a)
            for (auto& x : r) x = U(rng);
        auto inv = dense_inverse(a);
        if (dense_rank(a) < n) {
            CHECK(!inv.has_value());
            continue;
        }
        REQUIRE(inv.has_value());
        CHECK(dense_mul(a, *inv) == dense_identity(n));
        // same system through the sparse eliminator
        std::vector<SparseVec> rows(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (sgn(a[i][j]) != 0) rows[i][j] = a[i][j];
        Elimination el(n, n, rows);
        CHECK(el.rank() == n);
        SparseVec b{{0, Q(1)}, {n - 1, Q(2, 3)}};
        auto x = el.solve(b);
        REQUIRE(x.has_value());
        for (int i = 0; i < n; ++i) {
            Q s = 0;
            for (const auto& [j, v] : *x) s += a[i][j] * v;
            auto it = b.find(i);
            CHECK(s == (it == b.end() ? Q(0) : it->second));
        }
    }
}
