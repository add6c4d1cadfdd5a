#include "cf/lp_samples.hpp"

#include <algorithm>
#include <random>

#include "cf/errors.hpp"

namespace cf {

FramedMesh stellar_subdivide(const FramedMesh& m, const std::vector<int>& tets) {
    FramedMesh out = m;
    std::map<int, std::array<int, 4>> sub;  // old tet -> ids of its pieces, piece i has the cone point in slot i
    std::map<int, std::string> region_of;
    for (const auto& [name, ts] : m.regions)
        for (int t : ts) region_of[t] = name;
    for (int t : tets) {
        if (sub.count(t)) continue;
        int c = out.num_vertices++;
        std::array<int, 4> ids{};
        for (int i = 0; i < 4; ++i) {
            auto q = m.tets[t];
            q[i] = c;
            if (i == 0) {
                out.tets[t] = q;
                ids[i] = t;
            } else {
                ids[i] = out.num_tets();
                out.tets.push_back(q);
                out.orientation.push_back(m.orientation[t]);
                out.regions[region_of.at(t)].push_back(ids[i]);
            }
        }
        sub[t] = ids;
    }
    auto piece = [&](int t, int f) { return sub.count(t) ? sub[t][f] : t; };
    out.glue.clear();
    for (const auto& g : m.glue) out.glue.push_back({piece(g.t0, g.f0), g.f0, piece(g.t1, g.f1), g.f1, g.perm});
    for (const auto& [t, ids] : sub)
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                std::array<int, 4> p{0, 1, 2, 3};
                std::swap(p[i], p[j]);
                out.glue.push_back({ids[i], j, ids[j], i, p});
            }
    out.finalize();
    return out;
}

FramedMesh rp3() {
    FramedMesh m;
    m.num_vertices = 4;
    // Tet k has signs (+1, s2, s3, s4) with s_{j+1} = -1 iff bit j of k is set.
    auto signs = [](int k) {
        std::array<int, 4> s{1, 1, 1, 1};
        for (int j = 0; j < 3; ++j)
            if (k >> j & 1) s[j + 1] = -1;
        return s;
    };
    auto index = [](std::array<int, 4> s) {
        if (s[0] < 0)
            for (int& x : s) x = -x;
        int k = 0;
        for (int j = 0; j < 3; ++j)
            if (s[j + 1] < 0) k |= 1 << j;
        return k;
    };
    for (int k = 0; k < 8; ++k) {
        auto s = signs(k);
        m.tets.push_back({0, 1, 2, 3});
        m.orientation.push_back(s[0] * s[1] * s[2] * s[3]);
    }
    for (int k = 0; k < 8; ++k)
        for (int i = 0; i < 4; ++i) {
            auto s = signs(k);
            s[i] = -s[i];
            int k2 = index(s);
            if (k < k2) m.glue.push_back({k, i, k2, i, {0, 1, 2, 3}});
        }
    std::vector<int> all(8);
    for (int k = 0; k < 8; ++k) all[k] = k;
    m.regions["P"] = all;
    m.finalize();
    return m;
}

PuncturedRP3 punctured_rp3() {
    FramedMesh r = refine(rp3(), 1);
    std::vector<int> keep;
    for (int t = 1; t < r.num_tets(); ++t) keep.push_back(t);
    SubMesh s = extract(r, keep);
    PuncturedRP3 p;
    p.mesh = s.mesh;
    for (int a = 0; a < 4; ++a) p.hole[a] = s.parent_to_vertex.at(r.tets[0][a]);
    p.hole_orientation = r.orientation[0];
    return p;
}

LPSurgeryDatum stellar_datum(const FramedMesh& M, const std::string& region, uint64_t seed, int count) {
    LPSurgeryDatum d = copy_datum(M, region);
    std::mt19937_64 rng(seed);
    std::vector<int> ts(d.B.num_tets());
    for (int t = 0; t < d.B.num_tets(); ++t) ts[t] = t;
    std::shuffle(ts.begin(), ts.end(), rng);
    ts.resize(std::min<size_t>(ts.size(), count));
    d.B = stellar_subdivide(d.B, ts);
    return d;
}

LPSurgeryDatum rp3_datum(const FramedMesh& M, const std::string& region, uint64_t seed) {
    SubMesh A = extract_region(M, region);
    const auto& ta = A.mesh.topo();
    PuncturedRP3 P = punctured_rp3();
    // Vertex a of the hole tet goes to slot pi[a] of the patch hole. The two sides
    // of the seam must induce opposite orientations, which takes an odd pi when
    // the two tets carry the same orientation.
    auto hole_map = [&](int tet_orientation) {
        std::array<int, 4> pi{0, 1, 2, 3};
        if (tet_orientation == P.hole_orientation) std::swap(pi[0], pi[1]);
        return pi;
    };
    LPSurgeryDatum d;
    d.region = region;
    if (A.mesh.num_tets() == 1) {
        auto pi = hole_map(A.mesh.orientation[0]);
        d.B = P.mesh;
        for (int a = 0; a < 4; ++a) d.h.vmap[A.vertex_to_parent[A.mesh.tets[0][a]]] = P.hole[pi[a]];
        return d;
    }
    std::vector<int> cand;
    for (int t = 0; t < A.mesh.num_tets(); ++t) {
        bool inner = true;
        for (int v : A.mesh.tets[t]) inner = inner && !ta.boundary_vertex[v];
        if (inner) cand.push_back(t);
    }
    if (cand.empty()) throw Error("InvalidArgument", "region " + region + " has no tet away from its boundary");
    std::mt19937_64 rng(seed);
    int hole = cand[std::uniform_int_distribution<size_t>(0, cand.size() - 1)(rng)];
    std::vector<int> keep;
    for (int t = 0; t < A.mesh.num_tets(); ++t)
        if (t != hole) keep.push_back(t);
    SubMesh S = extract(A.mesh, keep);
    BoundaryIdentification h;
    auto pi = hole_map(A.mesh.orientation[hole]);
    for (int a = 0; a < 4; ++a) h.vmap[S.parent_to_vertex.at(A.mesh.tets[hole][a])] = P.hole[pi[a]];
    GlueResult g = glue(S.mesh, P.mesh, h);
    d.B = g.mesh;
    for (int v = 0; v < A.mesh.num_vertices; ++v)
        if (ta.boundary_vertex[v]) d.h.vmap[A.vertex_to_parent[v]] = g.outside_vertex[S.parent_to_vertex.at(v)];
    return d;
}

LPSurgeryDatum complement_datum(const FramedMesh& M, const std::string& region) {
    SubMesh C = extract_complement(M, region);
    LPSurgeryDatum d;
    d.region = region;
    d.B = C.mesh;
    for (int& o : d.B.orientation) o = -o;
    d.B.finalize();
    SubMesh A = extract_region(M, region);
    const auto& ta = A.mesh.topo();
    for (int v = 0; v < A.mesh.num_vertices; ++v)
        if (ta.boundary_vertex[v]) d.h.vmap[A.vertex_to_parent[v]] = C.parent_to_vertex.at(A.vertex_to_parent[v]);
    return d;
}

}  // namespace cf
