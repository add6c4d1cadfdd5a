// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cf/errors.hpp"
#include "cf/hopf.hpp"
#include "cf/invariants.hpp"
#include "cf/linking.hpp"
#include "cf/lp_samples.hpp"
#include "cf/pseudopar.hpp"

using namespace cf;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Pinned limits.
constexpr double kHopfSeconds = 60;
constexpr int kHopfMaxTets = 20000;
constexpr int kMinLinkPairs = 20;
constexpr int kMinCoincidencePairs = 20;
constexpr int kMinSurgeries = 10;
constexpr int kMinFiniteType = 5;
constexpr int kMinHomotopies = 5;
constexpr double kBumpPeak = 2.5;

std::string str(const Q& q) { return to_string(q); }

DiskMap degree(int d) {
    return [d](double r, double a) { return default_g(r, d * a); };
}

// ---- 1

struct HopfRun {
    Q variation, demo, closed;
    int tets = 0;
    double seconds = 0;
};

HopfRun hopf_run(uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    HopfRun r;
    auto ex = hopf_example({});
    r.tets = ex.hm.mesh.num_tets();
    r.variation = second_order_variation(ex.hm.mesh, ex.X, ex.d1, ex.d2, seed);
    auto d = hopf_demo({}, seed);
    r.demo = d.variation;
    r.closed = d.closed_sum;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

Outcome c1() {
    auto r = hopf_run(1);
    std::ostringstream s;
    s << "variation " << str(r.variation) << ", hopf-demo " << str(r.demo) << ", " << r.tets << " tets, " << r.seconds << " s";
    return {r.variation == -8 && r.demo == -8 && r.tets <= kHopfMaxTets && r.seconds < kHopfSeconds, s.str()};
}

// ---- 2

Outcome c2() {
    auto hm = hopf_s3({8, 6, 2});
    const auto& m = hm.mesh;
    auto c1 = edge_loop(m, hm.core1), c2 = edge_loop(m, hm.core2);
    auto L1 = pushoff(m, c1, 1), L2 = pushoff(m, c2, 11);
    Q lk = linking_number(m, L1, L2);
    // oracle: signed crossings of L1 with the hand-built disk bounded by core2
    auto disk = hm.seifert_disk_core2();
    const auto& t = m.topo();
    Q dot = 0;
    for (const auto& loop : L1.loops)
        for (const auto& seg : loop.segs) {
            auto it = disk.find(t.tet_face[seg.tet][seg.out_face]);
            if (it != disk.end()) dot += loop.mult * it->second * t.tet_face_sign[seg.tet][seg.out_face];
        }
    bool disk_ok = boundary(complex_of(m), 2, disk) == c2;
    // symmetry on random null-homologous pairs (every cycle bounds in S3)
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> U(0, m.num_vertices - 1);
    std::vector<std::vector<int>> adj(m.num_vertices);
    for (const auto& e : t.edge_verts) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    auto path = [&](int a, int b) {
        std::vector<int> prev(m.num_vertices, -1), q{a};
        prev[a] = a;
        for (size_t k = 0; k < q.size(); ++k)
            for (int y : adj[q[k]])
                if (prev[y] < 0) {
                    prev[y] = q[k];
                    q.push_back(y);
                }
        std::vector<int> p;
        for (int x = b; x != a; x = prev[x]) p.push_back(x);
        p.push_back(a);
        return std::vector<int>(p.rbegin(), p.rend());
    };
    auto random_loop = [&]() {
        int a = U(rng), b = U(rng), c = U(rng);
        std::vector<int> loop;
        for (auto [x, y] : {std::pair{a, b}, std::pair{b, c}, std::pair{c, a}}) {
            auto p = path(x, y);
            loop.insert(loop.end(), p.begin(), p.end() - 1);
        }
        return loop;
    };
    int pairs = 0, asym = 0;
    for (int rep = 0; rep < 80 && pairs < kMinLinkPairs; ++rep) {
        try {
            auto a = pushoff(m, edge_loop(m, random_loop()), 100 + rep);
            auto b = pushoff(m, edge_loop(m, random_loop()), 200 + rep);
            if (linking_number(m, a, b) != linking_number(m, b, a)) ++asym;
            ++pairs;
        } catch (const Error&) {
            // degenerate loops (repeated vertices, intersecting links) are skipped
        }
    }
    std::ostringstream s;
    s << "lk " << str(lk) << ", disk oracle " << str(dot) << ", symmetric on " << pairs - asym << "/" << pairs << " pairs";
    return {lk == 1 && dot == 1 && disk_ok && pairs >= kMinLinkPairs && asym == 0, s.str()};
}

// ---- 3

struct CoincidenceRun {
    int pairs = 0, bad = 0;
    std::vector<Q> values;
};

CoincidenceRun coincidence_run(uint64_t seed) {
    CoincidenceRun r;
    {
        auto st = solid_torus(16, 6);
        const auto& m = st.mesh;
        auto h = homology_of(m);
        auto tc = tube_chart(st);
        auto base = constant_combing(m, Vec3(1, 0, 0));
        std::vector<Combing> cs;
        for (int d = -2; d <= 2; ++d) cs.push_back(example_tube_combing(m, tc, base, degree(d)));
        auto cls = [&](const PLLink& L) { return h->coords(snap_to_cycle(m, L)).at(0); };
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b) {
                auto pr = perturb_pair(m, cs[a], cs[b], seed * 1000 + a * 5 + b);
                auto cl = coincidence_links(m, cs[a], pr.Y);
                Q ex = cls(euler_zero_chain(m, cs[a], seed)), ey = cls(euler_zero_chain(m, pr.Y, seed));
                Q lp = cls(cl.plus), lm = cls(cl.minus);
                if (2 * lm != ex - ey || 2 * lp != ex + ey) ++r.bad;
                r.values.insert(r.values.end(), {lp, lm, ex, ey});
                ++r.pairs;
            }
    }
    {
        // S3: H1 vanishes, so both identities say the links bound rationally
        HopfConfig cfg;
        cfg.n = 12;
        cfg.k = 8;
        cfg.a = 3;
        auto hm = hopf_s3(cfg);
        const auto& m = hm.mesh;
        auto base = constant_combing(m, Vec3(1, 0, 0));
        std::vector<Combing> cs{base};
        for (int d : {1, -1})
            for (int tube : {0, 1}) cs.push_back(example_tube_combing(m, hm.tubes[tube], base, degree(d)));
        for (size_t b = 1; b < cs.size(); ++b) {
            auto pr = perturb_pair(m, cs[0], cs[b], seed * 1000 + 100 + b);
            auto cl = coincidence_links(m, cs[0], pr.Y);
            try {
                for (const auto* L : {&cl.plus, &cl.minus}) (void)bounding_chain(m, snap_to_cycle(m, *L));
                (void)bounding_chain(m, snap_to_cycle(m, euler_zero_chain(m, pr.Y, seed)));
            } catch (const Error&) {
                ++r.bad;
            }
            r.values.push_back(Q(static_cast<long>(cl.minus.empty())));
            ++r.pairs;
        }
    }
    return r;
}

Outcome c3() {
    auto r = coincidence_run(1);
    std::ostringstream s;
    s << r.pairs << " pairs, " << r.bad << " violations";
    return {r.pairs >= kMinCoincidencePairs && r.bad == 0, s.str()};
}

// ---- 4

HopfConfig three_tube_config();

Outcome c4() {
    HopfConfig cfg = three_tube_config();
    auto hm = hopf_s3(cfg);
    FramedMesh M = hm.mesh;
    int ball = -1;
    for (int t : M.regions.at("ext")) {
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
    if (ball < 0) return {false, "no ball tet"};
    M = carve_region(M, "ball", {ball});
    std::vector<int> l1, l2;
    for (int i = 0; i < cfg.n; ++i) {
        l1.push_back(hm.vid(i, 14, 10));
        l2.push_back(hm.vid(8, i, 5));
    }
    auto lk = [&](const FramedMesh& m, const std::vector<int>& vm) {
        std::vector<int> a, b;
        for (int v : l1) a.push_back(vm.empty() ? v : vm[v]);
        for (int v : l2) b.push_back(vm.empty() ? v : vm[v]);
        return linking_number(m, pushoff(m, edge_loop(m, a), 3), pushoff(m, edge_loop(m, b), 5));
    };
    Q lk0 = lk(M, {});
    std::vector<LPSurgeryDatum> ds{copy_datum(M, "A1")};
    for (const char* r : {"A1", "A2", "A3"}) ds.push_back(stellar_datum(M, r, 7));
    for (const char* r : {"A1", "A2", "A3", "ball"}) ds.push_back(rp3_datum(M, r, 3));
    std::vector<std::vector<int>> runs;
    for (int i = 0; i < static_cast<int>(ds.size()); ++i) runs.push_back({i});
    const int k = static_cast<int>(ds.size());
    ds.push_back(stellar_datum(M, "A1", 1));
    ds.push_back(rp3_datum(M, "A2", 2));
    ds.push_back(stellar_datum(M, "A3", 3));
    ds.push_back(rp3_datum(M, "ball", 4));
    runs.push_back({k, k + 1});
    runs.push_back({k + 1, k + 3});
    runs.push_back({k, k + 2, k + 3});
    runs.push_back({k, k + 1, k + 2, k + 3});
    int ok = 0;
    for (const auto& I : runs) {
        bool lp = true;
        for (int i : I) lp = lp && validate_lp(M, ds[i]).ok;
        auto s = perform(M, nullptr, ds, I);
        auto h = homology_of(s.mesh);
        bool qhs = validate_manifold(s.mesh).ok() && h->betti(0) == 1 && h->betti(1) == 0 && h->betti(3) == 1;
        if (lp && qhs && lk(s.mesh, s.vertex_of_host) == lk0) ++ok;
    }
    // a non-LP replacement must be caught
    bool neg = !validate_lp(M, complement_datum(M, "A1")).ok;
    std::ostringstream s;
    s << ok << "/" << runs.size() << " surgeries give QHS with lk " << str(lk0) << " kept; complement rejected " << neg;
    return {static_cast<int>(runs.size()) >= kMinSurgeries && ok == static_cast<int>(runs.size()) && neg, s.str()};
}

// ---- 5, 6

HopfConfig three_tube_config() {
    HopfConfig cfg;
    cfg.third_tube = true;
    cfg.k = 20;
    cfg.third_w = 8;
    cfg.third_l0 = 6;
    cfg.third_j0 = 4;
    return cfg;
}

struct FiniteTypeRun {
    int instances = 0, nonzero = 0, closed_mismatch = 0;
    std::vector<Q> values;
};

FiniteTypeRun finite_type_run(uint64_t seed, bool with_closed) {
    FiniteTypeRun r;
    const int cases[][3] = {{1, 1, 1}, {1, -1, 1}, {2, 1, 1}, {1, 1, -1}, {-1, 2, 1}};
    for (const auto& c : cases) {
        auto ex = hopf_example(three_tube_config(), degree(c[0]), degree(c[1]), degree(c[2]));
        const auto& M = ex.hm.mesh;
        auto f = finite_type_check(M, ex.X, ex.d1, ex.d2, *ex.d3, seed);
        if (f.value != 0) ++r.nonzero;
        r.values.insert(r.values.end(), {f.value, f.variation_before, f.variation_after});
        if (with_closed) {
            Q before = closed_alternating_sum(M, ex.X, ex.d1, ex.d2, seed);
            if (before != f.variation_before || !f.closed_value || *f.closed_value != f.value) ++r.closed_mismatch;
        }
        ++r.instances;
    }
    return r;
}

FiniteTypeRun& finite_type_seed1() {
    static FiniteTypeRun r = finite_type_run(1, true);
    return r;
}

Outcome c5() {
    const auto& r = finite_type_seed1();
    std::ostringstream s;
    s << r.instances << " instances, " << r.nonzero << " nonzero";
    return {r.instances >= kMinFiniteType && r.nonzero == 0, s.str()};
}

Outcome c6() {
    auto h = hopf_run(1);
    const auto& r = finite_type_seed1();
    std::ostringstream s;
    s << "hopf closed " << str(h.closed) << " vs " << str(h.variation) << ", finite-type mismatches " << r.closed_mismatch;
    return {h.closed == h.variation && r.closed_mismatch == 0, s.str()};
}

// ---- 7

Outcome c7() {
    auto m = build_model({});
    int dd = meridian_degree(m, 'd'), dg = meridian_degree(m, 'g');
    PseudoParConfig bad;
    bad.corrupt = true;
    int h0 = lift_holonomy({}), h1 = lift_holonomy(bad);
    auto host = solid_torus_host(m, 16, 4, 2);
    auto hom = homology_of(host.mesh);
    Q g = hom->coords(host.gamma).at(0);
    auto s = siamese_sections(m, host);
    Q ed = hom->coords(snap_to_cycle(host.mesh, euler_zero_chain(host.mesh, s.d, 1))).at(0);
    Q eg = hom->coords(snap_to_cycle(host.mesh, euler_zero_chain(host.mesh, s.g, 1))).at(0);
    std::ostringstream o;
    o << "degrees " << dd << "/" << dg << ", holonomy " << h0 << "/" << h1 << ", e(d) " << str(ed) << " e(g) " << str(eg)
      << " [gamma] " << str(g);
    return {dd == 1 && dg == -1 && h0 == 1 && h1 == -1 && abs(g) == 1 && ed == g && eg == -g, o.str()};
}

// ---- 8

Outcome c8() {
    auto m = build_model({});
    auto host = s3_host(m, 16, 24);
    auto X = model_combing(m, host);
    Q ref = pseudopar_bracket(m, host, X, 1);
    int agree = 0, runs = 0;
    std::ostringstream o;
    o << "bracket " << str(ref) << ";";
    for (uint64_t seed = 2; seed < 2 + kMinHomotopies; ++seed) {
        BracketInfo bi;
        Q b = pseudopar_bracket(m, host, bump_homotopy(m, host, X, seed, kBumpPeak), 1, &bi);
        o << " " << str(b) << "(lk " << str(bi.lk) << ")";
        agree += b == ref;
        ++runs;
    }
    return {agree == runs && runs >= kMinHomotopies, o.str()};
}

// ---- 9

Outcome c9() {
    auto h1 = hopf_run(1);
    auto c1 = coincidence_run(1);
    const auto& f1 = finite_type_seed1();
    int diffs = 0;
    for (uint64_t seed : {2u, 3u}) {
        auto h = hopf_run(seed);
        diffs += h.variation != h1.variation || h.demo != h1.demo || h.closed != h1.closed;
        diffs += coincidence_run(seed).values != c1.values;
        diffs += finite_type_run(seed, false).values != f1.values;
    }
    std::ostringstream s;
    s << "seeds 1,2,3: " << diffs << " differing result sets";
    return {diffs == 0, s.str()};
}

}  // namespace

int main() {
    const std::pair<int, std::function<Outcome()>> crits[] = {{1, c1}, {2, c2}, {3, c3}, {4, c4}, {5, c5},
                                                               {6, c6}, {7, c7}, {8, c8}, {9, c9}};
    int failed = 0;
    for (const auto& [n, f] : crits) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d: %s  %s  (%.1f s)\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str(), sec);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed;
}
