#include "cf/homology.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "cf/errors.hpp"

namespace cf {

void chain_add(Chain& c, int s, const Q& q) {
    if (sgn(q) == 0) return;
    auto it = c.find(s);
    if (it == c.end()) {
        c.emplace(s, q);
        return;
    }
    it->second += q;
    if (sgn(it->second) == 0) c.erase(it);
}

Chain chain_scaled(const Chain& c, const Q& q) {
    Chain out;
    if (sgn(q) == 0) return out;
    for (const auto& [s, v] : c) out.emplace(s, v * q);
    return out;
}

Chain chain_sum(const Chain& a, const Chain& b, const Q& qb) {
    Chain out = a;
    for (const auto& [s, v] : b) chain_add(out, s, v * qb);
    return out;
}

ChainComplex complex_of(const FramedMesh& m) {
    const auto& t = m.topo();
    ChainComplex cx;
    cx.num_vertices = m.num_vertices;
    cx.edges = t.edge_verts;
    cx.faces.resize(t.num_faces);
    cx.face_orient.assign(t.num_faces, 1);
    for (int f = 0; f < t.num_faces; ++f)
        for (int q = 0; q < 3; ++q) cx.faces[f][q] = {t.face_edges[f][q], t.face_edge_sign[f][q]};
    cx.tets.resize(m.num_tets());
    for (int tt = 0; tt < m.num_tets(); ++tt)
        for (int i = 0; i < 4; ++i) cx.tets[tt][i] = {t.tet_face[tt][i], t.tet_face_sign[tt][i]};
    return cx;
}

Surface boundary_surface(const FramedMesh& m) {
    const auto& t = m.topo();
    Surface s;
    for (int f = 0; f < t.num_faces; ++f) {
        if (!t.boundary_face[f]) continue;
        std::array<std::pair<int, int>, 3> fe{};
        for (int q = 0; q < 3; ++q) {
            int e = t.face_edges[f][q];
            if (!s.edge_index.count(e)) {
                s.edge_index[e] = static_cast<int>(s.edge_of.size());
                s.edge_of.push_back(e);
            }
            fe[q] = {s.edge_index[e], t.face_edge_sign[f][q]};
        }
        auto [tt, i] = t.face_tets[f][0];
        s.cx.faces.push_back(fe);
        s.cx.face_orient.push_back(t.tet_face_sign[tt][i]);
        s.face_of.push_back(f);
    }
    for (int e : s.edge_of)
        for (int v : t.edge_verts[e])
            if (!s.vertex_index.count(v)) s.vertex_index[v] = 0;
    for (auto& [v, idx] : s.vertex_index) {
        idx = static_cast<int>(s.vertex_of.size());
        s.vertex_of.push_back(v);
    }
    s.cx.num_vertices = static_cast<int>(s.vertex_of.size());
    for (int e : s.edge_of) s.cx.edges.push_back({s.vertex_index[t.edge_verts[e][0]], s.vertex_index[t.edge_verts[e][1]]});
    return s;
}

Chain boundary(const ChainComplex& cx, int degree, const Chain& c) {
    Chain out;
    for (const auto& [s, v] : c) {
        if (degree == 1) {
            chain_add(out, cx.edges.at(s)[1], v);
            chain_add(out, cx.edges.at(s)[0], -v);
        } else if (degree == 2) {
            for (auto [e, k] : cx.faces.at(s)) chain_add(out, e, v * k);
        } else if (degree == 3) {
            for (auto [f, k] : cx.tets.at(s)) chain_add(out, f, v * k);
        }
    }
    return out;
}

Homology::Homology(ChainComplex cx) : cx_(std::move(cx)) {
    const int V = cx_.num_vertices, E = static_cast<int>(cx_.edges.size()), F = static_cast<int>(cx_.faces.size());
    std::vector<std::vector<std::pair<int, int>>> adj(V);
    for (int e = 0; e < E; ++e) {
        adj[cx_.edges[e][0]].push_back({e, cx_.edges[e][1]});
        adj[cx_.edges[e][1]].push_back({e, cx_.edges[e][0]});
    }
    // BFS spanning forest from the lowest vertex of each component.
    comp_of_vertex_.assign(V, -1);
    tree_edge_.assign(E, false);
    std::vector<int> parent_edge(V, -1), depth(V, 0);
    for (int r = 0; r < V; ++r) {
        if (comp_of_vertex_[r] >= 0) continue;
        comp_of_vertex_[r] = b0_;
        std::deque<int> q{r};
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (auto [e, y] : adj[x]) {
                if (comp_of_vertex_[y] >= 0) continue;
                comp_of_vertex_[y] = b0_;
                tree_edge_[e] = true;
                parent_edge[y] = e;
                depth[y] = depth[x] + 1;
                q.push_back(y);
            }
        }
        ++b0_;
    }
    row_of_edge_.assign(E, -1);
    for (int e = 0; e < E; ++e)
        if (!tree_edge_[e]) {
            row_of_edge_[e] = static_cast<int>(nontree_edges_.size());
            nontree_edges_.push_back(e);
        }
    std::vector<SparseVec> rows(nontree_edges_.size());
    for (int f = 0; f < F; ++f)
        for (auto [e, k] : cx_.faces[f]) {
            int r = row_of_edge_[e];
            if (r < 0) continue;
            auto it = rows[r].find(f);
            if (it == rows[r].end())
                rows[r].emplace(f, Q(k));
            else
                it->second += k;
        }
    elim_ = std::make_unique<Elimination>(static_cast<int>(rows.size()), F, std::move(rows));

    auto path_to_root = [&](int v, Chain& c, int sgn_) {
        // Adds sgn_ * (path from v up to the root).
        while (parent_edge[v] >= 0) {
            int e = parent_edge[v];
            int up = (cx_.edges[e][0] == v) ? cx_.edges[e][1] : cx_.edges[e][0];
            chain_add(c, e, Q(cx_.edges[e][0] == v ? sgn_ : -sgn_));
            v = up;
        }
    };
    for (int r : elim_->zero_rows()) {
        int e = nontree_edges_[r];
        Chain z{{e, Q(1)}};
        // e goes tail -> head; close the loop head -> root -> tail.
        path_to_root(cx_.edges[e][1], z, 1);
        path_to_root(cx_.edges[e][0], z, -1);
        basis_of_row_[r] = static_cast<int>(basis1_.size());
        basis1_.push_back(z);
        Chain phi;
        for (const auto& [row, v] : elim_->left_null(r)) phi.emplace(nontree_edges_[row], v);
        cocycles1_.push_back(phi);
    }

    // Closed components carry a fundamental class.
    if (!cx_.tets.empty()) {
        std::vector<int> inc(F, 0);
        for (const auto& t : cx_.tets)
            for (auto [f, k] : t) inc[f]++;
        std::vector<bool> has_tet(b0_, false), open(b0_, false);
        for (const auto& t : cx_.tets) has_tet[comp_of_vertex_[cx_.edges[cx_.faces[t[0].first][0].first][0]]] = true;
        for (int f = 0; f < F; ++f)
            if (inc[f] == 1) open[comp_of_vertex_[cx_.edges[cx_.faces[f][0].first][0]]] = true;
        for (int c = 0; c < b0_; ++c)
            if (has_tet[c] && !open[c]) ++b3_;
    }
}

int Homology::euler_characteristic() const {
    return cx_.num_vertices - static_cast<int>(cx_.edges.size()) + static_cast<int>(cx_.faces.size()) -
           static_cast<int>(cx_.tets.size());
}

int Homology::betti(int k) const {
    switch (k) {
        case 0:
            return b0_;
        case 1:
            return rank1();
        case 2:
            return euler_characteristic() - b0_ + rank1() + b3_;
        case 3:
            return b3_;
        default:
            return 0;
    }
}

std::vector<Q> Homology::coords(const Chain& cycle) const {
    if (!boundary(cx_, 1, cycle).empty()) throw Error("NotACycle", "chain has nonzero boundary");
    std::vector<Q> out(cocycles1_.size(), Q(0));
    for (size_t j = 0; j < cocycles1_.size(); ++j) {
        const Chain& phi = cocycles1_[j];
        for (const auto& [e, v] : cycle) {
            auto it = phi.find(e);
            if (it != phi.end()) out[j] += it->second * v;
        }
    }
    return out;
}

bool Homology::is_boundary(const Chain& cycle) const {
    for (const Q& q : coords(cycle))
        if (sgn(q) != 0) return false;
    return true;
}

std::optional<Chain> Homology::bounding_chain(const Chain& cycle) const {
    if (!boundary(cx_, 1, cycle).empty()) throw Error("NotACycle", "chain has nonzero boundary");
    SparseVec b;
    for (const auto& [e, v] : cycle)
        if (row_of_edge_[e] >= 0) b[row_of_edge_[e]] = v;
    auto x = elim_->solve(b);
    if (!x) return std::nullopt;
    return Chain(x->begin(), x->end());
}

std::vector<Chain> Homology::basis(int degree) const {
    std::vector<Chain> out;
    if (degree == 0) {
        std::vector<bool> seen(b0_, false);
        for (int v = 0; v < cx_.num_vertices; ++v)
            if (!seen[comp_of_vertex_[v]]) {
                seen[comp_of_vertex_[v]] = true;
                out.push_back({{v, Q(1)}});
            }
    } else if (degree == 1) {
        out = basis1_;
    } else if (degree == 2) {
        if (cx_.faces.size() > 6000) throw Error("TooLarge", "degree-2 representatives need a small complex");
        // Echelon form keyed by the largest face id: boundaries first, then cycles.
        std::map<int, Chain> ech;
        auto insert = [&](Chain c) {
            while (!c.empty()) {
                int lead = c.rbegin()->first;
                auto it = ech.find(lead);
                if (it == ech.end()) {
                    ech.emplace(lead, c);
                    return true;
                }
                c = chain_sum(c, it->second, -c.rbegin()->second / it->second.rbegin()->second);
            }
            return false;
        };
        for (size_t t = 0; t < cx_.tets.size(); ++t) {
            Chain c;
            for (auto [f, k] : cx_.tets[t]) chain_add(c, f, Q(k));
            insert(c);
        }
        for (int f : elim_->free_cols()) {
            Chain z;
            for (const auto& [j, v] : elim_->null_vector(f)) z.emplace(j, v);
            if (insert(z)) out.push_back(z);
        }
    } else if (degree == 3) {
        std::map<int, Chain> by_comp;
        std::vector<int> inc(cx_.faces.size(), 0);
        for (const auto& t : cx_.tets)
            for (auto [f, k] : t) inc[f]++;
        std::vector<bool> open(b0_, false);
        for (size_t f = 0; f < cx_.faces.size(); ++f)
            if (inc[f] == 1) open[comp_of_vertex_[cx_.edges[cx_.faces[f][0].first][0]]] = true;
        for (size_t t = 0; t < cx_.tets.size(); ++t) {
            int c = comp_of_vertex_[cx_.edges[cx_.faces[cx_.tets[t][0].first][0].first][0]];
            if (!open[c]) by_comp[c][static_cast<int>(t)] = 1;
        }
        for (auto& [c, ch] : by_comp) out.push_back(ch);
    }
    return out;
}

std::shared_ptr<const Homology> homology_of(const FramedMesh& m) {
    const Topology& t = m.topo();
    std::lock_guard<std::mutex> lock(t.cache_mu);
    if (!t.homology_cache) t.homology_cache = std::make_shared<const Homology>(complex_of(m));
    return std::static_pointer_cast<const Homology>(t.homology_cache);
}

Chain push_chain(const Chain& c, const std::vector<std::pair<int, int>>& edge_map) {
    Chain out;
    for (const auto& [e, v] : c) {
        auto [pe, s] = edge_map.at(e);
        chain_add(out, pe, v * s);
    }
    return out;
}

DenseQ induced_map_h1(const Homology& src, const Homology& dst, const std::vector<std::pair<int, int>>& edge_map) {
    const int n = src.rank1(), m = dst.rank1();
    DenseQ M = dense_zero(m, n);
    for (int j = 0; j < n; ++j) {
        auto c = dst.coords(push_chain(src.h1_basis()[j], edge_map));
        for (int i = 0; i < m; ++i) M[i][j] = c[i];
    }
    return M;
}

std::vector<std::pair<int, int>> submesh_edge_map(const SubMesh& s, const FramedMesh& parent) {
    const auto& ts = s.mesh.topo();
    const auto& tp = parent.topo();
    std::vector<std::pair<int, int>> out(ts.num_edges, {-1, 0});
    for (int k = 0; k < s.mesh.num_tets(); ++k) {
        int p = s.tet_to_parent[k];
        for (int e = 0; e < 6; ++e)
            out[ts.tet_edge[k][e]] = {tp.tet_edge[p][e], ts.tet_edge_sign[k][e] * tp.tet_edge_sign[p][e]};
    }
    return out;
}

std::vector<std::pair<int, int>> surface_edge_map(const Surface& s) {
    std::vector<std::pair<int, int>> out;
    for (int e : s.edge_of) out.push_back({e, 1});
    return out;
}

// With cocycles dual to the basis, the cup-product matrix is a signed inverse
// transpose of the intersection matrix; the sign is fixed so that a meridian
// and longitude of the standard solid torus pair to +1.
static const int kCupSign = -1;


DenseQ intersection_form(const Homology& surface) {
    const auto& cx = surface.complex();
    const auto& phi = surface.h1_cocycles();
    const int n = surface.rank1();
    auto val = [](const Chain& c, int e) {
        auto it = c.find(e);
        return it == c.end() ? Q(0) : it->second;
    };
    // The Alexander-Whitney product needs corner orders that come from a vertex
    // order, so each face is re-read with its corners sorted by vertex id.
    DenseQ C = dense_zero(n, n);
    for (size_t f = 0; f < cx.faces.size(); ++f) {
        std::array<int, 3> c{};
        int nc = 0;
        for (auto [e, k] : cx.faces[f])
            for (int v : cx.edges[e])
                if (std::find(c.begin(), c.begin() + nc, v) == c.begin() + nc) {
                    if (nc == 3) throw Error("InvalidMesh", "surface face with more than three vertices");
                    c[nc++] = v;
                }
        if (nc != 3) throw Error("InvalidMesh", "surface face with repeated vertices");
        std::sort(c.begin(), c.end());
        // (edge, direction sign, coefficient in the boundary of f)
        auto edge_between = [&](int u, int v) {
            for (auto [e, k] : cx.faces[f]) {
                if (cx.edges[e][0] == u && cx.edges[e][1] == v) return std::array<int, 3>{e, 1, k};
                if (cx.edges[e][0] == v && cx.edges[e][1] == u) return std::array<int, 3>{e, -1, k};
            }
            throw Error("InvalidMesh", "face edges do not match its corners");
        };
        auto [f01, s01, k01] = edge_between(c[0], c[1]);
        auto e12 = edge_between(c[1], c[2]);
        const int f12 = e12[0], s12 = e12[1];
        int par = k01 * s01;  // f = par [c0 c1 c2]
        Q w = cx.face_orient[f] * par * s01 * s12;
        for (int i = 0; i < n; ++i) {
            Q a = val(phi[i], f01);
            if (sgn(a) == 0) continue;
            for (int j = 0; j < n; ++j) {
                Q b = val(phi[j], f12);
                if (sgn(b) == 0) continue;
                C[i][j] += w * a * b;
            }
        }
    }
    auto inv = dense_inverse(C);
    if (!inv) throw Error("InvalidMesh", "intersection form is degenerate (surface not closed?)");
    DenseQ out = *inv;
    for (auto& r : out)
        for (auto& x : r) x *= kCupSign;
    return out;
}

Q intersection_number(const Homology& surface, const Chain& x, const Chain& y) {
    DenseQ I = intersection_form(surface);
    auto a = surface.coords(x), b = surface.coords(y);
    Q s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) s += a[i] * I[i][j] * b[j];
    return s;
}

QHHReport is_qhh(const FramedMesh& A) {
    QHHReport r;
    auto h = homology_of(A);
    Surface s = boundary_surface(A);
    Homology hs(s.cx);
    if (h->betti(0) != 1) {
        r.reason = "not connected";
        return r;
    }
    if (s.face_of.empty() || hs.betti(0) != 1) {
        r.reason = "boundary empty or disconnected";
        return r;
    }
    r.genus = h->betti(1);
    if (h->betti(2) != 0 || h->betti(3) != 0) {
        r.reason = "H2 or H3 nonzero";
        return r;
    }
    if (hs.betti(1) != 2 * r.genus) {
        r.reason = "boundary genus does not match H1";
        return r;
    }
    r.ok = true;
    return r;
}

Lagrangian lagrangian_of(const FramedMesh& A) {
    auto q = is_qhh(A);
    if (!q.ok) throw Error("NotAHandlebody", q.reason);
    auto h = homology_of(A);
    Surface s = boundary_surface(A);
    Homology hs(s.cx);
    DenseQ M = induced_map_h1(hs, *h, surface_edge_map(s));
    Lagrangian L;
    L.basis = dense_nullspace(M, hs.rank1());
    for (const auto& v : L.basis) {
        Chain c;
        for (size_t i = 0; i < v.size(); ++i)
            if (sgn(v[i]) != 0) c = chain_sum(c, hs.h1_basis()[i], v[i]);
        L.cycles.push_back(c);
    }
    return L;
}

}  // namespace cf
