#include <doctest.h>

#include <optional>

#include "cf/coincidence.hpp"
#include "cf/errors.hpp"
#include "cf/generators.hpp"
#include "cf/homology.hpp"
#include "cf/linking.hpp"

using namespace cf;

namespace {

struct TorusFixture {
    SolidTorus st = solid_torus(16, 6);
    std::shared_ptr<const Homology> h = homology_of(st.mesh);
    std::vector<Combing> by_degree;  // disk maps of degree -2..2 on the tube

    TorusFixture() {
        auto tc = tube_chart(st);
        auto base = constant_combing(st.mesh, Vec3(1, 0, 0));
        for (int d = -2; d <= 2; ++d)
            by_degree.push_back(example_tube_combing(st.mesh, tc, base, [d](double r, double a) { return default_g(r, d * a); }));
    }
    Q cls(const PLLink& L) const {
        auto c = h->coords(snap_to_cycle(st.mesh, L));
        REQUIRE(c.size() == 1);
        return c[0];
    }
};

const TorusFixture& fixture() {
    static TorusFixture f;
    return f;
}

}  // namespace

TEST_CASE("Euler class of a degree-d tube combing is 2d times the core") {
    const auto& f = fixture();
    for (int d = -2; d <= 2; ++d) CHECK(f.cls(euler_zero_chain(f.st.mesh, f.by_degree[d + 2], 1)) == Q(2 * d));
}

TEST_CASE("coincidence links against Euler classes, 25 pairs") {
    const auto& f = fixture();
    const auto& m = f.st.mesh;
    int n = 0;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
            CAPTURE(a - 2);
            CAPTURE(b - 2);
            const Combing& X = f.by_degree[a];
            auto pr = perturb_pair(m, X, f.by_degree[b], 11 + a * 5 + b);
            auto cl = coincidence_links(m, X, pr.Y);
            Q ex = f.cls(euler_zero_chain(m, X, 1)), ey = f.cls(euler_zero_chain(m, pr.Y, 1));
            Q lp = f.cls(cl.plus), lm = f.cls(cl.minus);
            CHECK(2 * lm == ex - ey);
            CHECK(2 * lp == ex + ey);
            // oracle: the tube degrees alone
            CHECK(lm == Q(a - b));
            CHECK(lp == Q(a + b - 4));
            ++n;
        }
    CHECK(n == 25);
}

TEST_CASE("link classes do not depend on the perturbation seed") {
    const auto& f = fixture();
    const auto& m = f.st.mesh;
    const Combing& X = f.by_degree[3];
    const Combing& Y = f.by_degree[0];
    std::optional<std::pair<Q, Q>> first;
    for (uint64_t seed : {1u, 2u, 3u, 99u}) {
        auto pr = perturb_pair(m, X, Y, seed);
        auto cl = coincidence_links(m, X, pr.Y);
        std::pair<Q, Q> got{f.cls(cl.plus), f.cls(cl.minus)};
        if (!first) first = got;
        CHECK(got == *first);
    }
}

TEST_CASE("minus link reverses when X and Y swap") {
    const auto& f = fixture();
    const auto& m = f.st.mesh;
    auto p1 = perturb_pair(m, f.by_degree[4], f.by_degree[1], 5);
    auto p2 = perturb_pair(m, f.by_degree[1], f.by_degree[4], 5);
    Q a = f.cls(coincidence_link(m, f.by_degree[4], p1.Y, -1));
    Q b = f.cls(coincidence_link(m, f.by_degree[1], p2.Y, -1));
    CHECK(a == -b);
}

TEST_CASE("Hopf tube combings on S3: coincidence links bound") {
    HopfConfig cfg;
    cfg.n = 12;
    cfg.k = 8;
    cfg.a = 3;
    auto hm = hopf_s3(cfg);
    const auto& m = hm.mesh;
    auto base = constant_combing(m, Vec3(1, 0, 0));
    auto Y = example_tube_combing(m, hm.tubes[0], base);
    auto pr = perturb_pair(m, base, Y, 3);
    auto cl = coincidence_links(m, base, pr.Y);
    CHECK_FALSE(cl.minus.empty());
    // S3 has no first homology, so every link bounds.
    CHECK_NOTHROW(bounding_chain(m, snap_to_cycle(m, cl.minus)));
    CHECK_NOTHROW(bounding_chain(m, snap_to_cycle(m, cl.plus)));
}
