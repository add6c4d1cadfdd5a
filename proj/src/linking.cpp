#include "cf/linking.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>

#include "cf/errors.hpp"

namespace cf {

namespace {

// Local vertex of tet t nearest to a point on local face i.
int snap_local(const FramedMesh& m, int t, int face, const std::array<Q, 4>& p) {
    int best = -1;
    for (int a = 0; a < 4; ++a) {
        if (a == face) continue;
        if (best < 0 || p[a] > p[best] || (p[a] == p[best] && m.tets[t][a] < m.tets[t][best])) best = a;
    }
    return best;
}

using P3 = std::array<Q, 3>;

P3 drop0(const std::array<Q, 4>& p) { return {p[1], p[2], p[3]}; }
P3 sub(const P3& a, const P3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Q det3(const P3& a, const P3& b, const P3& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

struct HTri {
    int tet;
    std::array<std::array<Q, 4>, 3> x;  // barycentric corners
    bool first;                          // (p, q, b): edge x0-x1 is the L1 segment
    Q mult;
};

// Face point in the global face's canonical corner coordinates.
std::array<Q, 3> face_coords(const Topology& t, int tet, int face, const std::array<Q, 4>& p) {
    std::array<Q, 3> out;
    for (int q = 0; q < 3; ++q) out[q] = p[t.tet_face_corner[tet][face][q]];
    return out;
}

int orient2(const std::array<Q, 3>& a, const std::array<Q, 3>& b, const std::array<Q, 3>& c) {
    // Orientation in (lambda1, lambda2) of the canonical face.
    Q d = (b[1] - a[1]) * (c[2] - a[2]) - (b[2] - a[2]) * (c[1] - a[1]);
    return sgn(d);
}

}  // namespace

Chain snap_to_cycle(const FramedMesh& m, const PLLink& L) {
    const auto& t = m.topo();
    Chain c;
    for (const auto& loop : L.loops)
        for (const auto& s : loop.segs) {
            int a = snap_local(m, s.tet, s.in_face, s.in);
            int b = snap_local(m, s.tet, s.out_face, s.out);
            if (a == b) continue;
            int le = local_edge_index(a, b);
            chain_add(c, t.tet_edge[s.tet][le], loop.mult * t.tet_edge_sign[s.tet][le] * (a < b ? 1 : -1));
        }
    return c;
}

Chain bounding_chain(const FramedMesh& m, const Chain& cycle) {
    auto h = homology_of(m);
    auto s = h->bounding_chain(cycle);
    if (!s) throw Error("NotNullHomologous", "cycle is not rationally null-homologous");
    return *s;
}

Q linking_number(const FramedMesh& m, const PLLink& L1, const PLLink& L2) {
    const auto& t = m.topo();
    auto h = homology_of(m);
    Chain c1 = snap_to_cycle(m, L1), c2 = snap_to_cycle(m, L2);
    if (!h->is_boundary(c2)) throw Error("NotNullHomologous", "second link is not rationally null-homologous");
    Chain sigma = bounding_chain(m, c1);

    // Face crossings.
    std::map<int, std::vector<std::pair<std::array<Q, 3>, Q>>> l2_cross;  // global face -> (point, signed mult)
    std::map<int, std::vector<std::pair<const Segment*, Q>>> l2_in_tet;
    for (const auto& loop : L2.loops)
        for (const auto& s : loop.segs) {
            int f = t.tet_face[s.tet][s.out_face];
            l2_cross[f].push_back({face_coords(t, s.tet, s.out_face, s.out), loop.mult * t.tet_face_sign[s.tet][s.out_face]});
            l2_in_tet[s.tet].push_back({&s, loop.mult});
        }
    for (const auto& loop : L1.loops)
        for (const auto& s : loop.segs) {
            auto it = l2_cross.find(t.tet_face[s.tet][s.out_face]);
            if (it == l2_cross.end()) continue;
            auto p = face_coords(t, s.tet, s.out_face, s.out);
            for (const auto& [r, w] : it->second)
                if (r == p) throw Error("LinksIntersect", "links share a face crossing");
        }

    Q lk = 0;
    for (const auto& [f, v] : sigma) {
        auto it = l2_cross.find(f);
        if (it == l2_cross.end()) continue;
        for (const auto& [r, w] : it->second) lk += v * w;
    }

    // Homotopy surface between L1 and its snapped cycle.
    for (const auto& loop : L1.loops)
        for (const auto& s : loop.segs) {
            int a = snap_local(m, s.tet, s.in_face, s.in);
            int b = snap_local(m, s.tet, s.out_face, s.out);
            std::array<Q, 4> A{0, 0, 0, 0}, B{0, 0, 0, 0};
            A[a] = 1;
            B[b] = 1;
            std::vector<HTri> tris;
            tris.push_back({s.tet, {s.in, s.out, B}, true, loop.mult});
            if (a != b) tris.push_back({s.tet, {s.in, B, A}, false, loop.mult});
            for (const auto& tri : tris) {
                // Lies in a face of the tet?
                int in_face = -1;
                for (int j = 0; j < 4; ++j)
                    if (sgn(tri.x[0][j]) == 0 && sgn(tri.x[1][j]) == 0 && sgn(tri.x[2][j]) == 0) in_face = j;
                if (in_face >= 0) {
                    int f = t.tet_face[tri.tet][in_face];
                    auto it = l2_cross.find(f);
                    if (it == l2_cross.end()) continue;
                    auto x0 = face_coords(t, tri.tet, in_face, tri.x[0]);
                    auto x1 = face_coords(t, tri.tet, in_face, tri.x[1]);
                    auto x2 = face_coords(t, tri.tet, in_face, tri.x[2]);
                    int o = orient2(x0, x1, x2);
                    if (o == 0) continue;
                    for (const auto& [r, w] : it->second) {
                        int s0 = orient2(x0, x1, r), s1 = orient2(x1, x2, r), s2 = orient2(x2, x0, r);
                        if (s0 == -o || s1 == -o || s2 == -o) continue;
                        if (s0 == 0 || s1 == 0 || s2 == 0) {
                            if (r == x0) throw Error("LinksIntersect", "second link meets the first");
                            throw Error("Degenerate", "link crosses an edge of the homotopy surface");
                        }
                        lk += tri.mult * w * o;
                    }
                    continue;
                }
                auto it = l2_in_tet.find(tri.tet);
                if (it == l2_in_tet.end()) continue;
                P3 x0 = drop0(tri.x[0]);
                P3 e1 = sub(drop0(tri.x[1]), x0), e2 = sub(drop0(tri.x[2]), x0);
                P3 nrm{e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]};
                if (sgn(nrm[0]) == 0 && sgn(nrm[1]) == 0 && sgn(nrm[2]) == 0) continue;
                for (const auto& [seg, w] : it->second) {
                    P3 r0 = drop0(seg->in), d = sub(drop0(seg->out), r0);
                    P3 w0 = sub(r0, x0);
                    Q D = det3(e1, e2, d);
                    if (sgn(D) == 0) {
                        if (sgn(det3(e1, e2, w0)) == 0) throw Error("Degenerate", "link segment coplanar with homotopy surface");
                        continue;
                    }
                    // r0 + s d = x0 + al e1 + be e2  ->  al e1 + be e2 - s d = w0
                    P3 nd{-d[0], -d[1], -d[2]};
                    Q Dm = det3(e1, e2, nd);
                    Q al = det3(w0, e2, nd) / Dm, be = det3(e1, w0, nd) / Dm, sp = det3(e1, e2, w0) / Dm;
                    Q ga = 1 - al - be;
                    if (sgn(sp) < 0 || sp > 1 || sgn(al) < 0 || sgn(be) < 0 || sgn(ga) < 0) continue;
                    if (sgn(sp) == 0 || sp == 1 || sgn(al) == 0 || sgn(be) == 0 || sgn(ga) == 0) {
                        // On the edge x0-x1 of the first triangle, i.e. on the L1 segment.
                        if (tri.first && sgn(be) == 0 && sgn(sp) > 0 && sp < 1) throw Error("LinksIntersect", "links intersect");
                        throw Error("Degenerate", "link touches the boundary of the homotopy surface");
                    }
                    lk += tri.mult * w * m.orientation[tri.tet] * sgn(D);
                }
            }
        }
    return lk;
}

PLLink pushoff(const FramedMesh& m, const Chain& cycle, uint64_t seed) {
    const auto& t = m.topo();
    auto h = homology_of(m);
    if (!boundary(h->complex(), 1, cycle).empty()) throw Error("NotACycle", "pushoff needs a cycle");
    // Flow decomposition into closed walks.
    std::map<int, Q> rem;  // edge -> remaining flow along its canonical direction
    for (const auto& [e, v] : cycle) rem[e] = v;
    std::map<int, std::set<int>> out_edges;  // vertex -> edges with flow leaving it
    auto tail = [&](int e) { return sgn(rem[e]) > 0 ? t.edge_verts[e][0] : t.edge_verts[e][1]; };
    auto head = [&](int e) { return sgn(rem[e]) > 0 ? t.edge_verts[e][1] : t.edge_verts[e][0]; };
    for (const auto& [e, v] : rem) out_edges[tail(e)].insert(e);
    std::vector<std::pair<std::vector<int>, Q>> walks;  // edge sequence (oriented by flow) + multiplicity
    while (!rem.empty()) {
        int e0 = rem.begin()->first;
        std::vector<int> path{e0};
        std::map<int, int> pos{{tail(e0), 0}};
        int v = head(e0);
        while (!pos.count(v)) {
            pos[v] = static_cast<int>(path.size());
            auto& oe = out_edges[v];
            if (oe.empty()) throw Error("NotACycle", "flow not conserved");
            path.push_back(*oe.begin());
            v = head(path.back());
        }
        std::vector<int> cyc(path.begin() + pos[v], path.end());
        Q mn = -1;
        std::vector<int> dirs;
        for (int e : cyc) {
            Q a = abs(rem[e]);
            if (mn < 0 || a < mn) mn = a;
        }
        for (int e : cyc) dirs.push_back(sgn(rem[e]));
        walks.push_back({cyc, mn});
        for (size_t k = 0; k < cyc.size(); ++k) {
            int e = cyc[k];
            int tl = tail(e);
            rem[e] -= dirs[k] * mn;
            if (sgn(rem[e]) == 0) {
                out_edges[tl].erase(e);
                rem.erase(e);
            }
        }
        // Encode direction in the sign, 1-based.
        for (size_t k = 0; k < cyc.size(); ++k) walks.back().first[k] = dirs[k] > 0 ? cyc[k] + 1 : -(cyc[k] + 1);
    }

    std::vector<int> edge_tet(t.num_edges, -1);
    for (int tt = 0; tt < m.num_tets(); ++tt)
        for (int e = 0; e < 6; ++e)
            if (edge_tet[t.tet_edge[tt][e]] < 0) edge_tet[t.tet_edge[tt][e]] = tt;

    // Route from tet a to tet b through tets containing vertex v.
    auto route = [&](int v, int a, int b) {
        std::vector<int> faces;
        if (a == b) return faces;
        std::map<int, std::pair<int, int>> prev;  // tet -> (previous tet, face)
        std::deque<int> q{a};
        prev[a] = {-1, -1};
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            if (x == b) break;
            std::vector<std::pair<int, int>> nb;
            for (int i = 0; i < 4; ++i) {
                if (m.tets[x][i] == v) continue;  // face opposite v does not contain v
                int f = t.tet_face[x][i];
                for (auto [y, j] : t.face_tets[f])
                    if (y != x || j != i) nb.push_back({f, y});
            }
            std::sort(nb.begin(), nb.end());
            for (auto [f, y] : nb)
                if (!prev.count(y)) {
                    prev[y] = {x, f};
                    q.push_back(y);
                }
        }
        if (!prev.count(b)) throw Error("InvalidMesh", "star of a vertex is disconnected");
        for (int x = b; x != a; x = prev[x].first) faces.push_back(prev[x].second);
        std::reverse(faces.begin(), faces.end());
        return faces;
    };

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> U(1, 1000000);
    PLLink out;
    for (const auto& [w, mult] : walks) {
        const int L = static_cast<int>(w.size());
        std::vector<int> verts;  // start vertex of each oriented edge
        std::vector<int> etets;
        for (int k = 0; k < L; ++k) {
            int e = std::abs(w[k]) - 1;
            verts.push_back(w[k] > 0 ? t.edge_verts[e][0] : t.edge_verts[e][1]);
            etets.push_back(edge_tet[e]);
        }
        // Tet walk: tets[j] --faces[j]--> tets[j+1], cyclic.
        std::vector<int> tw, fw;
        for (int k = 0; k < L; ++k) {
            int nxt = (k + 1) % L;
            auto r = route(verts[nxt], etets[k], etets[nxt]);
            int cur = etets[k];
            if (tw.empty())
                tw.push_back(cur);
            else if (tw.back() != cur)
                throw Error("InvalidMesh", "broken tet walk");
            for (int f : r) {
                const auto& ft = t.face_tets[f];
                int other = ft[0].first == tw.back() ? ft[1].first : ft[0].first;
                fw.push_back(f);
                tw.push_back(other);
            }
        }
        // tw.back() == tw.front(): drop the duplicate to make the walk cyclic.
        if (tw.size() > 1) tw.pop_back();
        // Remove back-tracks (enter and leave a tet through the same face).
        bool changed = true;
        while (changed && !fw.empty()) {
            changed = false;
            const int n = static_cast<int>(fw.size());
            for (int j = 0; j < n; ++j) {
                int jn = (j + 1) % n;
                if (fw[j] != fw[jn] || n < 2) continue;
                std::vector<int> ntw, nfw;
                for (int s = 1; s <= n - 2; ++s) {
                    int k = (jn + s) % n;
                    ntw.push_back(tw[k]);
                    nfw.push_back(fw[k]);
                }
                tw = ntw;
                fw = nfw;
                changed = true;
                break;
            }
        }
        if (fw.empty()) continue;  // contractible inside a single tet
        const int n = static_cast<int>(fw.size());
        // Crossing points, one per face passage.
        std::vector<std::array<Q, 3>> pts(n);
        for (int j = 0; j < n; ++j) {
            Q a = U(rng), b = U(rng), c = U(rng);
            Q s = a + b + c;
            pts[j] = {a / s, b / s, c / s};
        }
        Loop loop;
        loop.mult = mult;
        for (int j = 0; j < n; ++j) {
            int tet = tw[(j + 1) % n];
            int fin = fw[j], fout = fw[(j + 1) % n];
            Segment s;
            s.tet = tet;
            for (int i = 0; i < 4; ++i) {
                if (t.tet_face[tet][i] == fin && s.in_face < 0) s.in_face = i;
            }
            for (int i = 0; i < 4; ++i)
                if (t.tet_face[tet][i] == fout && i != s.in_face) s.out_face = i;
            if (s.in_face < 0 || s.out_face < 0) throw Error("InvalidMesh", "push-off walk inconsistent");
            for (int a = 0; a < 4; ++a) s.in[a] = s.out[a] = 0;
            for (int q = 0; q < 3; ++q) {
                s.in[t.tet_face_corner[tet][s.in_face][q]] = pts[j][q];
                s.out[t.tet_face_corner[tet][s.out_face][q]] = pts[(j + 1) % n][q];
            }
            loop.segs.push_back(s);
        }
        out.loops.push_back(loop);
    }
    return out;
}

int s2_linking(const std::vector<Vec3>& curve, bool through_minus_e3) {
    const int n = static_cast<int>(curve.size());
    for (const auto& p : curve)
        if (std::abs(p.y()) < 1e-12 && std::abs(p.z()) < 1e-12) throw Error("CurveHitsPole", "curve passes through a pole");
    int count = 0;
    const double zs = through_minus_e3 ? -1.0 : 1.0;
    for (int k = 0; k < n; ++k) {
        const Vec3& p = curve[k];
        const Vec3& q = curve[(k + 1) % n];
        if ((p.y() < 0) == (q.y() < 0)) continue;
        // Crossing point of the arc p-q with the plane y = 0.
        double z = (q.y() * p.z() - p.y() * q.z()) / (q.y() - p.y());
        if (std::abs(z) < 1e-15) throw Error("CurveHitsPole", "curve crosses through a pole");
        if (z * zs < 0) continue;
        int dir = q.y() > p.y() ? 1 : -1;
        count += through_minus_e3 ? -dir : dir;
    }
    return count;
}

}  // namespace cf
