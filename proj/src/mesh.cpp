#include "cf/mesh.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "cf/errors.hpp"

namespace cf {

const int kLocalEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

int local_edge_index(int a, int b) {
    if (a > b) std::swap(a, b);
    static const int idx[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return idx[a][b];
}

namespace {

int perm_sign3(const std::array<int, 3>& c) {
    int inv = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (c[i] > c[j]) ++inv;
    return (inv % 2) ? -1 : 1;
}

int perm_sign4(const std::array<int, 4>& c) {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (c[i] > c[j]) ++inv;
    return (inv % 2) ? -1 : 1;
}

struct ParityDSU {
    std::vector<int> parent, parity;
    explicit ParityDSU(int n) : parent(n), parity(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
    std::pair<int, int> find(int x) {
        int p = 0, r = x;
        while (parent[r] != r) {
            p ^= parity[r];
            r = parent[r];
        }
        // path compression
        int cur = x, cp = p;
        while (parent[cur] != cur) {
            int nxt = parent[cur], np = cp ^ parity[cur];
            parent[cur] = r;
            parity[cur] = cp;
            cur = nxt;
            cp = np;
        }
        return {r, p};
    }
    // Records slot a ~ slot b with relative parity `par`; returns false on conflict.
    bool unite(int a, int b, int par) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return ((pa ^ pb) == par);
        if (ra < rb) {
            parent[rb] = ra;
            parity[rb] = pa ^ pb ^ par;
        } else {
            parent[ra] = rb;
            parity[ra] = pa ^ pb ^ par;
        }
        return true;
    }
};

}  // namespace

void FramedMesh::finalize() {
    auto t = std::make_shared<Topology>();
    const int T = num_tets();
    if (static_cast<int>(orientation.size()) != T) throw Error("InvalidMesh", "orientation count mismatch");
    for (int i = 0; i < T; ++i) {
        for (int a = 0; a < 4; ++a) {
            if (tets[i][a] < 0 || tets[i][a] >= num_vertices)
                throw Error("InvalidMesh", "vertex id out of range in tet " + std::to_string(i));
            for (int b = a + 1; b < 4; ++b)
                if (tets[i][a] == tets[i][b])
                    throw Error("InvalidMesh", "repeated vertex in tet " + std::to_string(i));
        }
        if (orientation[i] != 1 && orientation[i] != -1)
            throw Error("InvalidMesh", "orientation must be +-1");
    }

    // Face slots.
    std::vector<int> face_partner(4 * T, -1), face_glue_idx(4 * T, -1);
    for (size_t g = 0; g < glue.size(); ++g) {
        const auto& G = glue[g];
        if (G.t0 < 0 || G.t0 >= T || G.t1 < 0 || G.t1 >= T || G.f0 < 0 || G.f0 > 3 || G.f1 < 0 || G.f1 > 3)
            throw Error("InvalidMesh", "face_glue index out of range");
        int s0 = 4 * G.t0 + G.f0, s1 = 4 * G.t1 + G.f1;
        if (s0 == s1) throw Error("InvalidMesh", "face glued to itself");
        if (face_partner[s0] >= 0 || face_partner[s1] >= 0)
            throw Error("InvalidMesh", "non-manifold triangle: face glued more than once");
        std::array<int, 4> seen{0, 0, 0, 0};
        for (int a = 0; a < 4; ++a) {
            if (G.perm[a] < 0 || G.perm[a] > 3) throw Error("InvalidMesh", "bad permutation");
            seen[G.perm[a]]++;
        }
        for (int a = 0; a < 4; ++a)
            if (seen[a] != 1) throw Error("InvalidMesh", "bad permutation");
        if (G.perm[G.f0] != G.f1) throw Error("InvalidMesh", "permutation does not match faces");
        for (int a = 0; a < 4; ++a)
            if (a != G.f0 && tets[G.t0][a] != tets[G.t1][G.perm[a]])
                throw Error("InvalidMesh", "glued vertices carry different ids");
        face_partner[s0] = s1;
        face_partner[s1] = s0;
        face_glue_idx[s0] = face_glue_idx[s1] = static_cast<int>(g);
    }

    t->tet_face.assign(T, {});
    t->tet_face_sign.assign(T, {});
    t->tet_face_corner.assign(T, {});
    std::vector<int> face_of_slot(4 * T, -1);
    for (int s = 0; s < 4 * T; ++s) {
        if (face_of_slot[s] >= 0) continue;
        int f = t->num_faces++;
        int tt = s / 4, i = s % 4;
        face_of_slot[s] = f;
        std::array<int, 3> corners{};
        int k = 0;
        for (int a = 0; a < 4; ++a)
            if (a != i) corners[k++] = a;
        t->tet_face_corner[tt][i] = corners;
        t->face_verts.push_back({tets[tt][corners[0]], tets[tt][corners[1]], tets[tt][corners[2]]});
        t->face_tets.push_back({{tt, i}});
        int p = face_partner[s];
        if (p >= 0) {
            face_of_slot[p] = f;
            int t2 = p / 4, i2 = p % 4;
            const auto& G = glue[face_glue_idx[s]];
            std::array<int, 3> c2{};
            if (G.t0 == tt && G.f0 == i) {
                for (int q = 0; q < 3; ++q) c2[q] = G.perm[corners[q]];
            } else {
                std::array<int, 4> inv{};
                for (int a = 0; a < 4; ++a) inv[G.perm[a]] = a;
                for (int q = 0; q < 3; ++q) c2[q] = inv[corners[q]];
            }
            t->tet_face_corner[t2][i2] = c2;
            t->face_tets.back().push_back({t2, i2});
        }
    }
    for (int tt = 0; tt < T; ++tt)
        for (int i = 0; i < 4; ++i) {
            int f = face_of_slot[4 * tt + i];
            t->tet_face[tt][i] = f;
            int s = ((i % 2) ? -1 : 1) * orientation[tt] * perm_sign3(t->tet_face_corner[tt][i]);
            t->tet_face_sign[tt][i] = s;
        }

    // Edge slots, identified through face gluings.
    ParityDSU dsu(6 * T);
    for (const auto& G : glue) {
        for (int e = 0; e < 6; ++e) {
            int a = kLocalEdges[e][0], b = kLocalEdges[e][1];
            if (a == G.f0 || b == G.f0) continue;
            int pa = G.perm[a], pb = G.perm[b];
            int par = (pa < pb) ? 0 : 1;
            if (!dsu.unite(6 * G.t0 + e, 6 * G.t1 + local_edge_index(pa, pb), par))
                throw Error("InvalidMesh", "edge identified with its reverse");
        }
    }
    std::vector<int> edge_of_root(6 * T, -1), root_parity_of_canon(6 * T, 0);
    t->tet_edge.assign(T, {});
    t->tet_edge_sign.assign(T, {});
    for (int s = 0; s < 6 * T; ++s) {
        auto [r, p] = dsu.find(s);
        if (edge_of_root[r] < 0) {
            edge_of_root[r] = t->num_edges++;
            root_parity_of_canon[r] = p;
            int tt = s / 6, e = s % 6;
            t->edge_verts.push_back({tets[tt][kLocalEdges[e][0]], tets[tt][kLocalEdges[e][1]]});
        }
        t->tet_edge[s / 6][s % 6] = edge_of_root[r];
        t->tet_edge_sign[s / 6][s % 6] = (p == root_parity_of_canon[r]) ? 1 : -1;
    }

    // Face boundaries.
    t->face_edges.resize(t->num_faces);
    t->face_edge_sign.resize(t->num_faces);
    for (int f = 0; f < t->num_faces; ++f) {
        auto [tt, i] = t->face_tets[f][0];
        const auto& c = t->tet_face_corner[tt][i];
        const std::array<std::array<int, 2>, 3> es{{{c[1], c[2]}, {c[0], c[2]}, {c[0], c[1]}}};
        const int base[3] = {1, -1, 1};
        for (int q = 0; q < 3; ++q) {
            int a = es[q][0], b = es[q][1];
            int le = local_edge_index(a, b);
            t->face_edges[f][q] = t->tet_edge[tt][le];
            t->face_edge_sign[f][q] = base[q] * t->tet_edge_sign[tt][le] * (a < b ? 1 : -1);
        }
    }

    t->vertex_tets.assign(num_vertices, {});
    for (int tt = 0; tt < T; ++tt)
        for (int a = 0; a < 4; ++a) t->vertex_tets[tets[tt][a]].push_back(tt);

    t->boundary_face.assign(t->num_faces, false);
    t->boundary_edge.assign(t->num_edges, false);
    t->boundary_vertex.assign(num_vertices, false);
    for (int f = 0; f < t->num_faces; ++f) {
        if (t->face_tets[f].size() != 1) continue;
        t->boundary_face[f] = true;
        for (int q = 0; q < 3; ++q) {
            t->boundary_edge[t->face_edges[f][q]] = true;
            t->boundary_vertex[t->face_verts[f][q]] = true;
        }
    }

    // Regions.
    if (regions.empty()) {
        std::vector<int> all(T);
        std::iota(all.begin(), all.end(), 0);
        regions["M"] = all;
    }
    t->region_of_tet.assign(T, -1);
    for (const auto& [name, ts] : regions) {
        int ri = static_cast<int>(t->region_names.size());
        t->region_names.push_back(name);
        for (int tt : ts) {
            if (tt < 0 || tt >= T) throw Error("InvalidMesh", "region tet out of range");
            if (t->region_of_tet[tt] >= 0) throw Error("InvalidMesh", "regions overlap at tet " + std::to_string(tt));
            t->region_of_tet[tt] = ri;
        }
    }
    for (int tt = 0; tt < T; ++tt)
        if (t->region_of_tet[tt] < 0) throw Error("InvalidMesh", "tet " + std::to_string(tt) + " in no region");
    t->home_region.assign(num_vertices, -1);
    for (int v = 0; v < num_vertices; ++v)
        if (!t->vertex_tets[v].empty()) t->home_region[v] = t->region_of_tet[t->vertex_tets[v].front()];

    trans_index_.clear();
    auto ridx = [&](const std::string& n) {
        auto it = std::find(t->region_names.begin(), t->region_names.end(), n);
        if (it == t->region_names.end()) throw Error("InvalidMesh", "transition names unknown region " + n);
        return static_cast<int>(it - t->region_names.begin());
    };
    for (const auto& tr : transitions) {
        if (tr.vertex < 0 || tr.vertex >= num_vertices) throw Error("InvalidMesh", "transition vertex out of range");
        int a = ridx(tr.from), b = ridx(tr.to);
        trans_index_[{tr.vertex, a, b}] = tr.rot;
        if (!trans_index_.count({tr.vertex, b, a})) trans_index_[{tr.vertex, b, a}] = tr.rot.transpose();
    }
    topo_ = t;
}

const Topology& FramedMesh::topo() const {
    if (!topo_) throw Error("InvalidMesh", "mesh not finalized");
    return *topo_;
}

int FramedMesh::region_index(const std::string& name) const {
    const auto& n = topo().region_names;
    auto it = std::find(n.begin(), n.end(), name);
    if (it == n.end()) throw Error("UnknownRegion", name);
    return static_cast<int>(it - n.begin());
}

Mat3 FramedMesh::transition(int v, int from_region, int to_region) const {
    if (from_region == to_region) return Mat3::Identity();
    auto it = trans_index_.find({v, from_region, to_region});
    if (it == trans_index_.end()) return Mat3::Identity();
    return it->second;
}

bool is_rotation(const Mat3& r, double tol) {
    return (r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

void glue_by_vertices(FramedMesh& m) {
    std::map<std::array<int, 3>, std::vector<std::pair<int, int>>> by_triple;
    for (int t = 0; t < m.num_tets(); ++t)
        for (int i = 0; i < 4; ++i) {
            std::array<int, 3> k{};
            int q = 0;
            for (int a = 0; a < 4; ++a)
                if (a != i) k[q++] = m.tets[t][a];
            std::sort(k.begin(), k.end());
            by_triple[k].push_back({t, i});
        }
    m.glue.clear();
    for (const auto& [k, inc] : by_triple) {
        if (inc.size() > 2) throw Error("InvalidMesh", "non-manifold triangle: more than two tets share a face");
        if (inc.size() < 2) continue;
        auto [t0, f0] = inc[0];
        auto [t1, f1] = inc[1];
        FaceGlue g{t0, f0, t1, f1, {}};
        for (int a = 0; a < 4; ++a) {
            if (a == f0) {
                g.perm[a] = f1;
                continue;
            }
            for (int b = 0; b < 4; ++b)
                if (m.tets[t1][b] == m.tets[t0][a]) g.perm[a] = b;
        }
        m.glue.push_back(g);
    }
}

Diagnostics validate_manifold(const FramedMesh& input) {
    Diagnostics d;
    FramedMesh m = input;
    try {
        m.finalize();
    } catch (const Error& e) {
        d.violations.push_back(e.what());
        return d;
    }
    const auto& t = m.topo();
    for (int f = 0; f < t.num_faces; ++f)
        if (t.face_tets[f].size() == 2) {
            auto [t0, i0] = t.face_tets[f][0];
            auto [t1, i1] = t.face_tets[f][1];
            if (t.tet_face_sign[t0][i0] != -t.tet_face_sign[t1][i1])
                d.violations.push_back("orientation mismatch across face " + std::to_string(f) + " (tets " +
                                       std::to_string(t0) + "," + std::to_string(t1) + ")");
        }
    // Boundary surface is a closed oriented surface: the boundary of the boundary vanishes.
    std::vector<int> bb(t.num_edges, 0), bcount(t.num_edges, 0);
    for (int f = 0; f < t.num_faces; ++f) {
        if (!t.boundary_face[f]) continue;
        auto [tt, i] = t.face_tets[f][0];
        for (int q = 0; q < 3; ++q) {
            bb[t.face_edges[f][q]] += t.tet_face_sign[tt][i] * t.face_edge_sign[f][q];
            bcount[t.face_edges[f][q]]++;
        }
    }
    for (int e = 0; e < t.num_edges; ++e) {
        if (bcount[e] != 0 && bcount[e] != 2)
            d.violations.push_back("boundary edge " + std::to_string(e) + " lies on " + std::to_string(bcount[e]) +
                                   " boundary triangles");
        else if (bb[e] != 0)
            d.violations.push_back("boundary surface not coherently oriented at edge " + std::to_string(e));
    }
    // Edge links: tets around an edge form a cycle (interior) or a path (boundary).
    std::vector<std::vector<std::pair<int, int>>> edge_slots(t.num_edges);
    for (int tt = 0; tt < m.num_tets(); ++tt)
        for (int e = 0; e < 6; ++e) edge_slots[t.tet_edge[tt][e]].push_back({tt, e});
    for (int e = 0; e < t.num_edges; ++e) {
        const auto& slots = edge_slots[e];
        // Adjacency through faces containing the edge.
        std::map<std::pair<int, int>, int> id;
        for (size_t k = 0; k < slots.size(); ++k) id[slots[k]] = static_cast<int>(k);
        std::vector<int> deg(slots.size(), 0);
        std::vector<std::vector<int>> adj(slots.size());
        for (size_t k = 0; k < slots.size(); ++k) {
            auto [tt, le] = slots[k];
            int a = kLocalEdges[le][0], b = kLocalEdges[le][1];
            for (int i = 0; i < 4; ++i) {
                if (i == a || i == b) continue;
                int f = t.tet_face[tt][i];
                if (t.face_tets[f].size() != 2) continue;
                auto other = t.face_tets[f][0] == std::make_pair(tt, i) ? t.face_tets[f][1] : t.face_tets[f][0];
                // The edge's slot in the other tet: the two corners shared with a and b.
                const auto& c0 = t.tet_face_corner[tt][i];
                const auto& c1 = t.tet_face_corner[other.first][other.second];
                int oa = -1, ob = -1;
                for (int q = 0; q < 3; ++q) {
                    if (c0[q] == a) oa = c1[q];
                    if (c0[q] == b) ob = c1[q];
                }
                auto it = id.find({other.first, local_edge_index(oa, ob)});
                if (it == id.end()) continue;
                adj[k].push_back(it->second);
                deg[k]++;
            }
        }
        bool bad = false;
        int ends = 0;
        for (int x : deg) {
            if (x > 2) bad = true;
            if (x < 2) ends += 2 - x;
        }
        std::vector<bool> seen(slots.size(), false);
        std::vector<int> st{0};
        seen[0] = true;
        size_t cnt = 1;
        while (!st.empty()) {
            int x = st.back();
            st.pop_back();
            for (int y : adj[x])
                if (!seen[y]) {
                    seen[y] = true;
                    ++cnt;
                    st.push_back(y);
                }
        }
        if (cnt != slots.size()) bad = true;
        if (t.boundary_edge[e] ? ends != 2 : ends != 0) bad = true;
        if (bad) d.violations.push_back("non-manifold edge " + std::to_string(e));
    }
    for (int v = 0; v < m.num_vertices; ++v)
        if (t.vertex_tets[v].empty()) d.violations.push_back("vertex " + std::to_string(v) + " in no tet");
    // Regions are connected.
    for (size_t r = 0; r < t.region_names.size(); ++r) {
        std::vector<int> ts;
        for (int tt = 0; tt < m.num_tets(); ++tt)
            if (t.region_of_tet[tt] == static_cast<int>(r)) ts.push_back(tt);
        if (ts.empty()) continue;
        std::set<int> seen{ts[0]};
        std::vector<int> st{ts[0]};
        while (!st.empty()) {
            int x = st.back();
            st.pop_back();
            for (int i = 0; i < 4; ++i)
                for (auto [y, j] : t.face_tets[t.tet_face[x][i]]) {
                    (void)j;
                    if (t.region_of_tet[y] == static_cast<int>(r) && !seen.count(y)) {
                        seen.insert(y);
                        st.push_back(y);
                    }
                }
        }
        if (seen.size() != ts.size()) d.violations.push_back("disconnected region " + t.region_names[r]);
    }
    // Transitions.
    std::map<int, std::set<int>> regions_at;
    for (int tt = 0; tt < m.num_tets(); ++tt)
        for (int a = 0; a < 4; ++a) regions_at[m.tets[tt][a]].insert(t.region_of_tet[tt]);
    for (const auto& tr : m.transitions) {
        if (!is_rotation(tr.rot)) d.violations.push_back("bad transition at vertex " + std::to_string(tr.vertex));
        int a = m.region_index(tr.from), b = m.region_index(tr.to);
        if (!regions_at[tr.vertex].count(a) || !regions_at[tr.vertex].count(b))
            d.violations.push_back("bad transition: vertex " + std::to_string(tr.vertex) + " not shared by regions");
    }
    for (const auto& [v, rs] : regions_at) {
        if (rs.size() < 3) continue;
        std::vector<int> r(rs.begin(), rs.end());
        for (size_t i = 0; i < r.size(); ++i)
            for (size_t j = 0; j < r.size(); ++j)
                for (size_t k = 0; k < r.size(); ++k) {
                    if (i == j || j == k || i == k) continue;
                    Mat3 lhs = m.transition(v, r[i], r[k]);
                    Mat3 rhs = m.transition(v, r[j], r[k]) * m.transition(v, r[i], r[j]);
                    if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-12)
                        d.violations.push_back("bad transition: cocycle fails at vertex " + std::to_string(v));
                }
    }
    return d;
}

SubMesh extract(const FramedMesh& m, const std::vector<int>& tet_list) {
    const auto& t = m.topo();
    SubMesh s;
    std::vector<int> tl = tet_list;
    std::sort(tl.begin(), tl.end());
    tl.erase(std::unique(tl.begin(), tl.end()), tl.end());
    std::vector<int> new_tet(m.num_tets(), -1);
    std::set<int> verts;
    for (size_t k = 0; k < tl.size(); ++k) {
        new_tet[tl[k]] = static_cast<int>(k);
        for (int a = 0; a < 4; ++a) verts.insert(m.tets[tl[k]][a]);
    }
    for (int v : verts) {
        s.parent_to_vertex[v] = static_cast<int>(s.vertex_to_parent.size());
        s.vertex_to_parent.push_back(v);
    }
    s.tet_to_parent = tl;
    FramedMesh& out = s.mesh;
    out.num_vertices = static_cast<int>(verts.size());
    for (int tt : tl) {
        std::array<int, 4> q{};
        for (int a = 0; a < 4; ++a) q[a] = s.parent_to_vertex[m.tets[tt][a]];
        out.tets.push_back(q);
        out.orientation.push_back(m.orientation[tt]);
    }
    for (const auto& g : m.glue)
        if (new_tet[g.t0] >= 0 && new_tet[g.t1] >= 0) out.glue.push_back({new_tet[g.t0], g.f0, new_tet[g.t1], g.f1, g.perm});
    for (const auto& [name, ts] : m.regions) {
        std::vector<int> r;
        for (int tt : ts)
            if (new_tet[tt] >= 0) r.push_back(new_tet[tt]);
        if (!r.empty()) {
            std::sort(r.begin(), r.end());
            out.regions[name] = r;
        }
    }
    for (const auto& tr : m.transitions) {
        if (!s.parent_to_vertex.count(tr.vertex)) continue;
        if (!out.regions.count(tr.from) || !out.regions.count(tr.to)) continue;
        out.transitions.push_back({s.parent_to_vertex[tr.vertex], tr.from, tr.to, tr.rot});
    }
    (void)t;
    out.finalize();
    return s;
}

SubMesh extract_region(const FramedMesh& m, const std::string& region) {
    auto it = m.regions.find(region);
    if (it == m.regions.end()) throw Error("UnknownRegion", region);
    return extract(m, it->second);
}

SubMesh extract_complement(const FramedMesh& m, const std::string& region) {
    int r = m.region_index(region);
    std::vector<int> ts;
    for (int tt = 0; tt < m.num_tets(); ++tt)
        if (m.topo().region_of_tet[tt] != r) ts.push_back(tt);
    return extract(m, ts);
}

GlueResult glue(const FramedMesh& outside, const FramedMesh& patch, const BoundaryIdentification& h) {
    const auto& to = outside.topo();
    const auto& tp = patch.topo();
    // Bijectivity.
    std::set<int> img;
    for (auto [a, b] : h.vmap) {
        if (a < 0 || a >= outside.num_vertices || !to.boundary_vertex[a])
            throw Error("IdentificationNotBijective", "vertex " + std::to_string(a) + " is not on the boundary of the outside mesh");
        if (b < 0 || b >= patch.num_vertices || !tp.boundary_vertex[b])
            throw Error("IdentificationNotBijective", "vertex " + std::to_string(b) + " is not on the boundary of the patch");
        if (!img.insert(b).second) throw Error("IdentificationNotBijective", "two vertices map to " + std::to_string(b));
    }
    for (int v = 0; v < patch.num_vertices; ++v)
        if (tp.boundary_vertex[v] && !img.count(v))
            throw Error("IdentificationNotBijective", "patch boundary vertex " + std::to_string(v) + " not matched");

    GlueResult r;
    FramedMesh& out = r.mesh;
    std::map<int, int> inv;
    for (auto [a, b] : h.vmap) inv[b] = a;
    r.outside_vertex.resize(outside.num_vertices);
    std::iota(r.outside_vertex.begin(), r.outside_vertex.end(), 0);
    int nv = outside.num_vertices;
    r.patch_vertex.assign(patch.num_vertices, -1);
    for (int v = 0; v < patch.num_vertices; ++v) r.patch_vertex[v] = inv.count(v) ? inv[v] : nv++;
    out.num_vertices = nv;
    out.tets = outside.tets;
    out.orientation = outside.orientation;
    out.glue = outside.glue;
    int off = outside.num_tets();
    r.outside_tet.resize(outside.num_tets());
    std::iota(r.outside_tet.begin(), r.outside_tet.end(), 0);
    for (int tt = 0; tt < patch.num_tets(); ++tt) {
        std::array<int, 4> q{};
        for (int a = 0; a < 4; ++a) q[a] = r.patch_vertex[patch.tets[tt][a]];
        out.tets.push_back(q);
        out.orientation.push_back(patch.orientation[tt]);
        r.patch_tet.push_back(off + tt);
    }
    for (const auto& g : patch.glue) out.glue.push_back({g.t0 + off, g.f0, g.t1 + off, g.f1, g.perm});

    // Match boundary faces by vertex triples.
    std::map<std::array<int, 3>, std::pair<int, int>> outside_faces;
    for (int f = 0; f < to.num_faces; ++f) {
        if (!to.boundary_face[f]) continue;
        auto k = to.face_verts[f];
        std::sort(k.begin(), k.end());
        if (outside_faces.count(k)) throw Error("IdentificationNotBijective", "boundary faces not determined by vertices");
        outside_faces[k] = to.face_tets[f][0];
    }
    int matched = 0, same = 0, opposite = 0;
    for (int f = 0; f < tp.num_faces; ++f) {
        if (!tp.boundary_face[f]) continue;
        auto [pt, pi] = tp.face_tets[f][0];
        std::array<int, 3> k{};
        for (int q = 0; q < 3; ++q) k[q] = r.patch_vertex[tp.face_verts[f][q]];
        std::sort(k.begin(), k.end());
        auto it = outside_faces.find(k);
        if (it == outside_faces.end()) throw Error("IdentificationNotBijective", "boundary triangle has no partner");
        auto [ot, oi] = it->second;
        FaceGlue g{ot, oi, pt + off, pi, {}};
        for (int a = 0; a < 4; ++a) {
            if (a == oi) {
                g.perm[a] = pi;
                continue;
            }
            for (int b = 0; b < 4; ++b)
                if (out.tets[pt + off][b] == outside.tets[ot][a]) g.perm[a] = b;
        }
        out.glue.push_back(g);
        ++matched;
        outside_faces.erase(it);
    }
    if (matched == 0) throw Error("IdentificationNotBijective", "no boundary triangles matched");
    (void)same;
    (void)opposite;

    // Regions (names kept; clashes get a suffix) and transitions.
    out.regions = outside.regions;
    std::map<std::string, std::string> rename;
    for (const auto& [name, ts] : patch.regions) {
        std::string nn = name;
        while (out.regions.count(nn)) nn += "'";
        rename[name] = nn;
        std::vector<int> q;
        for (int tt : ts) q.push_back(tt + off);
        out.regions[nn] = q;
    }
    out.transitions = outside.transitions;
    for (const auto& tr : patch.transitions)
        out.transitions.push_back({r.patch_vertex[tr.vertex], rename[tr.from], rename[tr.to], tr.rot});
    out.finalize();
    // Orientation compatibility across the new gluing.
    const auto& tn = out.topo();
    for (int f = 0; f < tn.num_faces; ++f)
        if (tn.face_tets[f].size() == 2) {
            auto [t0, i0] = tn.face_tets[f][0];
            auto [t1, i1] = tn.face_tets[f][1];
            if (tn.tet_face_sign[t0][i0] != -tn.tet_face_sign[t1][i1])
                throw Error("OrientationIncompatible", "identification preserves boundary orientation");
        }
    return r;
}

Refinement refine_once(const FramedMesh& m) {
    const auto& t = m.topo();
    Refinement R;
    const int V = m.num_vertices, E = t.num_edges, F = t.num_faces;
    FramedMesh& out = R.mesh;
    out.num_vertices = V + E + F + m.num_tets();
    R.vertex_origin.resize(out.num_vertices);
    for (int v = 0; v < V; ++v) R.vertex_origin[v] = {0, v};
    for (int e = 0; e < E; ++e) R.vertex_origin[V + e] = {1, e};
    for (int f = 0; f < F; ++f) R.vertex_origin[V + E + f] = {2, f};
    for (int tt = 0; tt < m.num_tets(); ++tt) R.vertex_origin[V + E + F + tt] = {3, tt};
    std::array<int, 4> p{0, 1, 2, 3};
    std::vector<std::array<int, 4>> perms;
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::map<std::string, std::vector<int>> regions;
    for (int tt = 0; tt < m.num_tets(); ++tt) {
        for (int k = 0; k < 24; ++k) {
            const auto& pi = perms[k];
            std::array<int, 4> q{m.tets[tt][pi[0]], V + t.tet_edge[tt][local_edge_index(pi[0], pi[1])],
                                 V + E + t.tet_face[tt][pi[3]], V + E + F + tt};
            R.tet_origin.push_back({tt, k});
            regions[t.region_names[t.region_of_tet[tt]]].push_back(out.num_tets());
            out.tets.push_back(q);
            out.orientation.push_back(m.orientation[tt] * perm_sign4(pi));
        }
    }
    out.regions = regions;
    // Transitions: original vertices keep theirs; new vertices take the mean rotation of the simplex corners.
    out.transitions = m.transitions;
    if (!m.transitions.empty()) {
        auto corners_of = [&](int nv) -> std::vector<int> {
            auto [kind, id] = R.vertex_origin[nv];
            if (kind == 1) return {t.edge_verts[id][0], t.edge_verts[id][1]};
            if (kind == 2) return {t.face_verts[id][0], t.face_verts[id][1], t.face_verts[id][2]};
            return {m.tets[id][0], m.tets[id][1], m.tets[id][2], m.tets[id][3]};
        };
        std::set<std::tuple<int, std::string, std::string>> done;
        for (int nv = V; nv < out.num_vertices; ++nv) {
            auto cs = corners_of(nv);
            for (const auto& tr : m.transitions) {
                if (tr.vertex != cs[0]) continue;
                Eigen::Quaterniond acc(0, 0, 0, 0);
                Eigen::Quaterniond first(tr.rot);
                bool all = true;
                for (int c : cs) {
                    int a = m.region_index(tr.from), b = m.region_index(tr.to);
                    bool has = false;
                    for (const auto& u : m.transitions)
                        if (u.vertex == c && ((u.from == tr.from && u.to == tr.to) || (u.from == tr.to && u.to == tr.from)))
                            has = true;
                    if (!has) {
                        all = false;
                        break;
                    }
                    Eigen::Quaterniond qc(m.transition(c, a, b));
                    if (qc.dot(first) < 0) qc.coeffs() *= -1;
                    acc.coeffs() += qc.coeffs();
                }
                if (!all) continue;
                if (!done.insert({nv, tr.from, tr.to}).second) continue;
                acc.normalize();
                out.transitions.push_back({nv, tr.from, tr.to, acc.toRotationMatrix()});
            }
        }
    }
    glue_by_vertices(out);
    out.finalize();
    return R;
}

FramedMesh refine(const FramedMesh& m, int levels) {
    if (levels < 0) throw Error("InvalidArgument", "levels must be >= 0");
    FramedMesh cur = m;
    if (!cur.finalized()) cur.finalize();
    for (int i = 0; i < levels; ++i) cur = refine_once(cur).mesh;
    return cur;
}

}  // namespace cf
