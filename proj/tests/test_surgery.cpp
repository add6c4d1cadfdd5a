#include "doctest.h"

#include <algorithm>

#include "cf/errors.hpp"
#include "cf/generators.hpp"
#include "cf/linking.hpp"
#include "cf/lp_samples.hpp"
#include "cf/surgery.hpp"

using namespace cf;

namespace {

struct Host {
    HopfMesh hm;
    FramedMesh M;
    std::vector<int> l1, l2;  // two unknotted loops in ext with lk 1

    Host() {
        // four pairwise separated regions: A1, A2, a wide third tube A3, and a one-tet ball
        HopfConfig cfg;
        cfg.third_tube = true;
        cfg.k = 20;
        cfg.third_w = 8;
        cfg.third_l0 = 6;
        cfg.third_j0 = 4;
        hm = hopf_s3(cfg);
        M = hm.mesh;
        const auto& ext = M.regions.at("ext");
        int ball = -1;
        for (int t : ext) {
            bool in = true;
            for (int v : M.tets[t]) {
                auto a = hm.ijl[v];
                in = in && a[0] >= 2 && a[0] <= 3 && a[1] >= 0 && a[1] <= 1 && a[2] >= 7 && a[2] <= 8;
            }
            if (in) {
                ball = t;
                break;
            }
        }
        REQUIRE(ball >= 0);
        M = carve_region(M, "ball", {ball});
        for (int i = 0; i < cfg.n; ++i) {
            l1.push_back(hm.vid(i, 14, 10));
            l2.push_back(hm.vid(8, i, 5));
        }
    }
    Q lk(const FramedMesh& m, const std::vector<int>& vmap) const {
        std::vector<int> a, b;
        for (int v : l1) a.push_back(vmap.empty() ? v : vmap[v]);
        for (int v : l2) b.push_back(vmap.empty() ? v : vmap[v]);
        return linking_number(m, pushoff(m, edge_loop(m, a), 3), pushoff(m, edge_loop(m, b), 5));
    }
};

const Host& host() {
    static Host h;
    return h;
}

void check_rational_homology_sphere(const Host& H, const Surgered& s) {
    CHECK(validate_manifold(s.mesh).ok());
    auto h = homology_of(s.mesh);
    CHECK(h->betti(0) == 1);
    CHECK(h->betti(1) == 0);
    CHECK(h->betti(2) == 0);
    CHECK(h->betti(3) == 1);
    // LP surgery away from the loops keeps their linking number
    CHECK(H.lk(s.mesh, s.vertex_of_host) == Q(1));
}

}  // namespace

TEST_CASE("RP3 and its puncture") {
    auto R = rp3();
    CHECK(validate_manifold(R).ok());
    auto h = homology_of(R);
    CHECK(h->betti(1) == 0);
    CHECK(h->betti(3) == 1);
    auto P = punctured_rp3();
    auto hp = homology_of(P.mesh);
    CHECK(hp->betti(0) == 1);
    CHECK(hp->betti(1) == 0);
    CHECK(hp->betti(2) == 0);
    CHECK(hp->betti(3) == 0);
}

TEST_CASE("stellar subdivision keeps the manifold") {
    auto st = solid_torus(3, 4);
    auto s = stellar_subdivide(st.mesh, {0, 5, 7});
    CHECK(s.num_tets() == st.mesh.num_tets() + 9);
    CHECK(s.num_vertices == st.mesh.num_vertices + 3);
    CHECK(validate_manifold(s).ok());
    CHECK(homology_of(s)->betti(1) == 1);
}

TEST_CASE("host loops link once") {
    const auto& H = host();
    CHECK(H.lk(H.M, {}) == Q(1));
}

TEST_CASE("single LP surgeries on S3") {
    const auto& H = host();
    std::vector<std::pair<std::string, LPSurgeryDatum>> ds;
    ds.push_back({"copy A1", copy_datum(H.M, "A1")});
    for (const char* r : {"A1", "A2", "A3"}) ds.push_back({std::string("stellar ") + r, stellar_datum(H.M, r, 7)});
    for (const char* r : {"A1", "A2", "A3", "ball"}) ds.push_back({std::string("rp3 ") + r, rp3_datum(H.M, r, 3)});
    CHECK(ds.size() == 8);
    for (const auto& [name, d] : ds) {
        CAPTURE(name);
        auto rep = validate_lp(H.M, d);
        CHECK(rep.ok);
        CHECK(rep.genus_A == rep.genus_B);
        auto s = perform(H.M, nullptr, {d}, {0});
        check_rational_homology_sphere(H, s);
    }
}

TEST_CASE("simultaneous LP surgeries") {
    const auto& H = host();
    std::vector<LPSurgeryDatum> ds{stellar_datum(H.M, "A1", 1), rp3_datum(H.M, "A2", 2), stellar_datum(H.M, "A3", 3),
                                   rp3_datum(H.M, "ball", 4)};
    std::vector<std::vector<int>> subsets{{0, 1}, {1, 3}, {0, 2, 3}, {0, 1, 2, 3}};
    for (const auto& I : subsets) {
        CAPTURE(I.size());
        auto s = perform(H.M, nullptr, ds, I);
        check_rational_homology_sphere(H, s);
    }
}

TEST_CASE("thin and touching regions") {
    HopfConfig cfg;
    cfg.third_tube = true;
    auto hm = hopf_s3(cfg);
    // the default third tube is two cells wide: no tet avoids its boundary
    CHECK_THROWS_AS(rp3_datum(hm.mesh, "A3", 1), Error);
    // and it fills the gap between the two tubes, so it touches A1
    std::vector<LPSurgeryDatum> ds{copy_datum(hm.mesh, "A1"), copy_datum(hm.mesh, "A3")};
    CHECK_THROWS_WITH_AS(perform(hm.mesh, nullptr, ds, {0, 1}), doctest::Contains("RegionsOverlap"), Error);
}

TEST_CASE("the mirrored complement is not LP") {
    const auto& H = host();
    auto d = complement_datum(H.M, "A1");
    auto rep = validate_lp(H.M, d);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.offending.empty());
    auto s = perform(H.M, nullptr, {d}, {0});
    CHECK(homology_of(s.mesh)->betti(1) == 1);
}

TEST_CASE("overlapping data are refused") {
    const auto& H = host();
    std::vector<LPSurgeryDatum> ds{copy_datum(H.M, "A1"), stellar_datum(H.M, "A1", 2)};
    CHECK_THROWS_AS(perform(H.M, nullptr, ds, {0, 1}), Error);
}
