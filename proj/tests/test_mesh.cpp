#include "doctest.h"

#include "cf/errors.hpp"
#include "cf/generators.hpp"
#include "cf/homology.hpp"
#include "cf/mesh.hpp"

using namespace cf;

TEST_CASE("single tet tables") {
    auto m = single_tet();
    CHECK(m.num_edges() == 6);
    CHECK(m.num_faces() == 4);
    const auto& t = m.topo();
    int nb = 0;
    for (bool b : t.boundary_face) nb += b;
    CHECK(nb == 4);
    CHECK(validate_manifold(m).ok());
}

TEST_CASE("two tet S3 is closed") {
    auto m = two_tet_s3();
    CHECK(validate_manifold(m).ok());
    for (bool b : m.topo().boundary_face) CHECK(!b);
    // d^2 = 0 on every tet
    auto cx = complex_of(m);
    for (int tt = 0; tt < m.num_tets(); ++tt) {
        Chain c{{tt, Q(1)}};
        CHECK(boundary(cx, 2, boundary(cx, 3, c)).empty());
    }
}

TEST_CASE("bad gluing rejected") {
    FramedMesh m;
    m.num_vertices = 4;
    m.tets = {{0, 1, 2, 3}};
    m.orientation = {1};
    m.glue.push_back({0, 0, 0, 0, {0, 1, 2, 3}});
    CHECK_THROWS_AS(m.finalize(), Error);
}

TEST_CASE("orientation mismatch is reported") {
    auto m = two_tet_s3();
    FramedMesh b;
    b.num_vertices = m.num_vertices;
    b.tets = m.tets;
    b.orientation = {1, 1};
    b.glue = m.glue;
    b.finalize();
    CHECK(!validate_manifold(b).ok());
}

TEST_CASE("refinement keeps homology and orientation") {
    auto st = solid_torus(1, 3);
    auto r = refine(st.mesh, 1);
    CHECK(r.num_tets() == 24 * st.mesh.num_tets());
    CHECK(validate_manifold(r).ok());
    auto h = homology_of(r);
    CHECK(h->betti(0) == 1);
    CHECK(h->betti(1) == 1);
    CHECK(h->betti(2) == 0);
    CHECK(r.num_vertices - r.num_edges() + r.num_faces() - r.num_tets() == 0);
}

TEST_CASE("extract and glue back a region") {
    auto hm = hopf_s3({8, 6, 2});
    auto inside = extract_region(hm.mesh, "A1");
    auto outside = extract_complement(hm.mesh, "A1");
    CHECK(validate_manifold(inside.mesh).ok());
    CHECK(validate_manifold(outside.mesh).ok());
    BoundaryIdentification h;
    for (const auto& [pv, ov] : outside.parent_to_vertex) {
        auto it = inside.parent_to_vertex.find(pv);
        if (it != inside.parent_to_vertex.end()) h.vmap[ov] = it->second;
    }
    auto g = glue(outside.mesh, inside.mesh, h);
    CHECK(g.mesh.num_tets() == hm.mesh.num_tets());
    CHECK(validate_manifold(g.mesh).ok());
    auto hh = homology_of(g.mesh);
    CHECK(hh->betti(1) == 0);
    CHECK(hh->betti(3) == 1);
}

TEST_CASE("glue rejects non-bijective maps") {
    auto st = solid_torus(1, 3);
    auto in = extract_region(st.mesh, "M");
    BoundaryIdentification h;
    h.vmap[0] = 0;
    CHECK_THROWS_AS(glue(st.mesh, in.mesh, h), Error);
}
