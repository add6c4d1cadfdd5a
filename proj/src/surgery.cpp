#include "cf/surgery.hpp"

#include <algorithm>
#include <set>

#include "cf/coincidence.hpp"
#include "cf/errors.hpp"
#include "cf/linking.hpp"

namespace cf {

namespace {

// Vertex map of the datum in the local ids of the extracted region.
std::map<int, int> local_h(const SubMesh& A, const LPSurgeryDatum& d) {
    std::map<int, int> out;
    for (auto [hv, bv] : d.h.vmap) {
        auto it = A.parent_to_vertex.find(hv);
        if (it == A.parent_to_vertex.end()) throw Error("BoundaryMismatch", "vertex " + std::to_string(hv) + " is not in the region");
        out[it->second] = bv;
    }
    return out;
}

// B edge -> (A edge, sign) along the identified boundaries, by matching faces.
std::map<int, std::pair<int, int>> boundary_edge_map(const FramedMesh& A, const FramedMesh& B, const std::map<int, int>& hAB) {
    const auto& ta = A.topo();
    const auto& tb = B.topo();
    std::map<std::pair<int, int>, std::vector<int>> a_edges;  // sorted endpoint pair -> boundary edges of A
    for (int e = 0; e < ta.num_edges; ++e) {
        if (!ta.boundary_edge[e]) continue;
        auto it0 = hAB.find(ta.edge_verts[e][0]), it1 = hAB.find(ta.edge_verts[e][1]);
        if (it0 == hAB.end() || it1 == hAB.end()) throw Error("BoundaryMismatch", "boundary vertex of A not identified");
        a_edges[std::minmax(it0->second, it1->second)].push_back(e);
    }
    std::map<int, std::pair<int, int>> out;
    for (int e = 0; e < tb.num_edges; ++e) {
        if (!tb.boundary_edge[e]) continue;
        int u = tb.edge_verts[e][0], v = tb.edge_verts[e][1];
        auto it = a_edges.find(std::minmax(u, v));
        if (it == a_edges.end() || it->second.size() != 1)
            throw Error("BoundaryMismatch", "boundary edge of B has no unique partner");
        int ea = it->second[0];
        out[e] = {ea, hAB.at(ta.edge_verts[ea][0]) == u ? 1 : -1};
    }
    return out;
}

// Restriction of a host combing to the extracted region, in the region's frames.
Combing restrict_combing(const FramedMesh& M, const Combing& X, const SubMesh& A) {
    Combing out;
    const auto& ta = A.mesh.topo();
    out.vec.resize(A.mesh.num_vertices);
    for (int v = 0; v < A.mesh.num_vertices; ++v) {
        int hv = A.vertex_to_parent[v];
        int reg = M.region_index(ta.region_names[ta.home_region[v]]);
        out.vec[v] = in_region(M, X.vec, hv, reg);
    }
    return out;
}

Combing with_sigma(const FramedMesh& A, Combing X, const std::map<int, Vec3>& given) {
    X.sigma.clear();
    auto def = default_sigma(A, X.vec);
    for (auto& [v, s] : def) {
        auto it = given.find(v);
        Vec3 g = it != given.end() ? it->second : s;
        g -= g.dot(X.vec[v]) * X.vec[v];
        if (g.norm() < 1e-9) throw Error("SigmaVanishes", "section vanishes at vertex " + std::to_string(v));
        X.sigma[v] = g.normalized();
    }
    return X;
}

Chain link_class_chain(const FramedMesh& m, const PLLink& L) { return snap_to_cycle(m, L); }

}  // namespace

FramedMesh carve_region(const FramedMesh& M, const std::string& name, const std::vector<int>& tets) {
    if (M.regions.count(name)) throw Error("InvalidArgument", "region " + name + " exists");
    FramedMesh out = M;
    std::set<int> moved(tets.begin(), tets.end());
    const auto& t = M.topo();
    std::set<std::pair<int, std::string>> old_at;  // (vertex, old region) pairs touched by the new region
    for (auto& [rn, ts] : out.regions) {
        std::vector<int> keep;
        for (int tt : ts)
            if (!moved.count(tt)) keep.push_back(tt);
        ts = keep;
    }
    std::erase_if(out.regions, [](const auto& kv) { return kv.second.empty(); });
    out.regions[name] = std::vector<int>(moved.begin(), moved.end());
    for (int tt : moved)
        for (int a = 0; a < 4; ++a) old_at.insert({M.tets[tt][a], t.region_names[t.region_of_tet[tt]]});
    // Regions still present at a vertex after the move.
    auto present_after = [&](int v, const std::string& rn) {
        for (int tt : t.vertex_tets[v]) {
            std::string cur = moved.count(tt) ? name : t.region_names[t.region_of_tet[tt]];
            if (cur == rn) return true;
        }
        return false;
    };
    // The new region's frame is its old region's frame; copy every transition out of it.
    for (auto [v, oldr] : old_at) {
        int ro = M.region_index(oldr);
        for (int r = 0; r < static_cast<int>(t.region_names.size()); ++r) {
            const std::string& rn = t.region_names[r];
            if (!present_after(v, rn)) continue;
            out.transitions.push_back({v, name, rn, M.transition(v, ro, r)});
        }
    }
    // Drop transitions whose regions vanished.
    std::erase_if(out.transitions, [&](const Transition& tr) { return !out.regions.count(tr.from) || !out.regions.count(tr.to); });
    // Keep one transition per unordered pair and vertex.
    std::set<std::tuple<int, std::string, std::string>> seen;
    std::vector<Transition> uniq;
    for (const auto& tr : out.transitions) {
        auto k = std::make_tuple(tr.vertex, std::min(tr.from, tr.to), std::max(tr.from, tr.to));
        if (tr.from == tr.to || !seen.insert(k).second) continue;
        uniq.push_back(tr);
    }
    out.transitions = uniq;
    out.finalize();
    return out;
}

LPSurgeryDatum copy_datum(const FramedMesh& M, const std::string& region, const std::optional<Combing>& Xnew) {
    auto A = extract_region(M, region);
    LPSurgeryDatum d;
    d.region = region;
    d.B = A.mesh;
    const auto& ta = A.mesh.topo();
    for (int v = 0; v < A.mesh.num_vertices; ++v)
        if (ta.boundary_vertex[v]) d.h.vmap[A.vertex_to_parent[v]] = v;
    if (Xnew) d.XB = restrict_combing(M, *Xnew, A);
    return d;
}

bool is_copy(const FramedMesh& M, const LPSurgeryDatum& d) {
    auto it = M.regions.find(d.region);
    if (it == M.regions.end()) return false;
    auto A = extract(M, it->second);
    if (A.mesh.tets != d.B.tets || A.mesh.orientation != d.B.orientation) return false;
    for (auto [hv, bv] : d.h.vmap) {
        auto jt = A.parent_to_vertex.find(hv);
        if (jt == A.parent_to_vertex.end() || jt->second != bv) return false;
    }
    return true;
}

LPReport validate_lp(const FramedMesh& M, const LPSurgeryDatum& d, const Combing* X) {
    LPReport r;
    try {
        auto A = extract_region(M, d.region);
        auto qa = is_qhh(A.mesh), qb = is_qhh(d.B);
        r.genus_A = qa.genus;
        r.genus_B = qb.genus;
        if (!qa.ok) r.problems.push_back("A is not a rational homology handlebody: " + qa.reason);
        if (!qb.ok) r.problems.push_back("B is not a rational homology handlebody: " + qb.reason);
        if (qa.ok && qb.ok && qa.genus != qb.genus) r.problems.push_back("genus of A and B differ");
        auto hAB = local_h(A, d);
        // h must be a bijection of boundary vertices.
        std::set<int> img;
        for (auto [a, b] : hAB) img.insert(b);
        int nbA = 0, nbB = 0;
        for (int v = 0; v < A.mesh.num_vertices; ++v) nbA += A.mesh.topo().boundary_vertex[v];
        for (int v = 0; v < d.B.num_vertices; ++v) nbB += d.B.topo().boundary_vertex[v];
        if (static_cast<int>(hAB.size()) != nbA || static_cast<int>(img.size()) != nbB || nbA != nbB)
            r.problems.push_back("boundary identification is not a bijection");
        if (r.problems.empty()) {
            auto emap = boundary_edge_map(A.mesh, d.B, hAB);
            std::map<int, std::pair<int, int>> a_to_b;
            for (auto [eb, p] : emap) a_to_b[p.first] = {eb, p.second};
            auto L = lagrangian_of(A.mesh);
            auto hb = homology_of(d.B);
            auto surf = boundary_surface(A.mesh);
            for (const auto& c : L.cycles) {
                Chain mesh_chain = push_chain(c, surface_edge_map(surf));
                Chain in_b;
                for (auto [e, v] : mesh_chain) chain_add(in_b, a_to_b.at(e).first, v * a_to_b.at(e).second);
                if (!hb->is_boundary(in_b)) {
                    auto em = submesh_edge_map(A, M);
                    r.offending.push_back(push_chain(mesh_chain, em));
                }
            }
            if (!r.offending.empty()) r.problems.push_back("h does not carry the Lagrangian of A onto that of B");
        }
        if (X && d.XB && r.problems.empty()) {
            auto XA = restrict_combing(M, *X, A);
            for (auto [a, b] : hAB) {
                if ((XA.vec[a] - d.XB->vec[b]).norm() > 1e-9) {
                    r.problems.push_back("X_B differs from X at boundary vertex " + std::to_string(A.vertex_to_parent[a]));
                    break;
                }
            }
        }
    } catch (const Error& e) {
        r.problems.push_back(e.what());
    }
    r.ok = r.problems.empty();
    return r;
}

Surgered perform(const FramedMesh& M, const Combing* X, const std::vector<LPSurgeryDatum>& data, const std::vector<int>& I) {
    const auto& tm = M.topo();
    std::vector<int> sel = I;
    std::sort(sel.begin(), sel.end());
    sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
    std::vector<int> owner(M.num_tets(), -1);
    for (int i : sel) {
        if (i < 0 || i >= static_cast<int>(data.size())) throw Error("InvalidArgument", "surgery index out of range");
        auto it = M.regions.find(data[i].region);
        if (it == M.regions.end()) throw Error("UnknownRegion", data[i].region);
        for (int tt : it->second) {
            if (owner[tt] >= 0) throw Error("RegionsOverlap", data[i].region + " overlaps " + data[owner[tt]].region);
            owner[tt] = i;
        }
        if (X && !data[i].XB) throw Error("InvalidArgument", "datum without replacement combing");
    }
    // closures must be disjoint too: a shared boundary vertex would be cut twice
    std::vector<int> vowner(M.num_vertices, -1);
    for (int i : sel)
        for (int tt : M.regions.at(data[i].region))
            for (int v : M.tets[tt]) {
                if (vowner[v] >= 0 && vowner[v] != i)
                    throw Error("RegionsOverlap", data[i].region + " touches " + data[vowner[v]].region);
                vowner[v] = i;
            }
    Surgered out;
    if (sel.empty()) {
        out.mesh = M;
        if (X) out.X = *X;
        out.vertex_of_host.resize(M.num_vertices);
        for (int v = 0; v < M.num_vertices; ++v) out.vertex_of_host[v] = v;
        out.host_of_vertex = out.vertex_of_host;
        return out;
    }
    std::vector<int> keep;
    for (int tt = 0; tt < M.num_tets(); ++tt)
        if (owner[tt] < 0) keep.push_back(tt);
    auto C = extract(M, keep);
    FramedMesh cur = C.mesh;
    std::vector<int> host_of(C.vertex_to_parent);  // current vertex -> host vertex
    // Per current vertex: (datum index, B vertex) for vertices coming from a B.
    std::vector<std::pair<int, int>> from_b(cur.num_vertices, {-1, -1});
    std::vector<std::vector<int>> b_to_cur(data.size());
    for (int i : sel) {
        const auto& d = data[i];
        BoundaryIdentification h;
        for (auto [hv, bv] : d.h.vmap) {
            auto it = C.parent_to_vertex.find(hv);
            if (it == C.parent_to_vertex.end()) throw Error("BoundaryMismatch", "vertex " + std::to_string(hv) + " not on the cut");
            h.vmap[it->second] = bv;
        }
        GlueResult g = glue(cur, d.B, h);
        cur = g.mesh;
        host_of.resize(cur.num_vertices, -1);
        from_b.resize(cur.num_vertices, {-1, -1});
        b_to_cur[i] = g.patch_vertex;
        for (int bv = 0; bv < d.B.num_vertices; ++bv)
            if (host_of[g.patch_vertex[bv]] < 0) from_b[g.patch_vertex[bv]] = {i, bv};
    }
    // Frames across the new seams: B's home frame at a glued vertex is A's frame.
    const auto& tc = cur.topo();
    std::set<std::tuple<int, std::string, std::string>> have;
    for (const auto& tr : cur.transitions) have.insert({tr.vertex, tr.from, tr.to});
    for (int v = 0; v < cur.num_vertices; ++v) {
        int hv = host_of[v];
        if (hv < 0) continue;
        bool glued = false;
        for (int i : sel)
            if (data[i].h.vmap.count(hv)) glued = true;
        if (!glued) continue;
        // (region name, host region index, rotation region coords -> host region coords)
        struct Fr {
            std::string name;
            int host_region;
            Mat3 to_host;
        };
        std::vector<Fr> frames;
        std::set<std::string> names;
        for (int tt : tc.vertex_tets[v]) names.insert(tc.region_names[tc.region_of_tet[tt]]);
        for (const auto& nm : names) {
            // Which datum does this region belong to, if any?
            int di = -1, bv = -1;
            for (int i : sel) {
                const auto& bt = data[i].B.topo();
                auto it = data[i].h.vmap.find(hv);
                if (it == data[i].h.vmap.end()) continue;
                for (int tt : bt.vertex_tets[it->second]) {
                    std::string bn = bt.region_names[bt.region_of_tet[tt]];
                    // glue() appends primes on clashes
                    if (nm.rfind(bn, 0) == 0 && nm.find_first_not_of('\'', bn.size()) == std::string::npos) {
                        di = i;
                        bv = it->second;
                    }
                }
            }
            if (di >= 0) {
                const auto& B = data[di].B;
                const auto& bt = B.topo();
                std::string bn = nm.substr(0, nm.find('\''));
                int rb = B.region_index(bn);
                frames.push_back({nm, M.region_index(data[di].region), B.transition(bv, rb, bt.home_region[bv])});
            } else {
                frames.push_back({nm, M.region_index(nm), Mat3::Identity()});
            }
        }
        for (size_t p = 0; p < frames.size(); ++p)
            for (size_t q = 0; q < frames.size(); ++q) {
                if (p == q) continue;
                const auto &a = frames[p], &b = frames[q];
                if (have.count({v, a.name, b.name}) || have.count({v, b.name, a.name})) continue;
                Mat3 rot = b.to_host.transpose() * M.transition(hv, a.host_region, b.host_region) * a.to_host;
                cur.transitions.push_back({v, a.name, b.name, rot});
                have.insert({v, a.name, b.name});
            }
    }
    cur.finalize();
    out.mesh = cur;
    out.host_of_vertex = host_of;
    out.vertex_of_host.assign(M.num_vertices, -1);
    for (int v = 0; v < cur.num_vertices; ++v)
        if (host_of[v] >= 0) out.vertex_of_host[host_of[v]] = v;
    if (X) {
        const auto& tn = out.mesh.topo();
        Combing Y;
        Y.vec.resize(cur.num_vertices);
        for (int v = 0; v < cur.num_vertices; ++v) {
            std::string home = tn.region_names[tn.home_region[v]];
            if (host_of[v] >= 0) {
                // outside tets come first, so kept vertices have a host home region
                Y.vec[v] = in_region(M, X->vec, host_of[v], M.region_index(home));
            } else {
                auto [i, bv] = from_b[v];
                const auto& B = data[i].B;
                const auto& bt = B.topo();
                std::string bn = home.substr(0, home.find('\''));
                Vec3 x = data[i].XB->vec[bv];  // B home frame
                if (B.regions.count(bn)) {
                    Y.vec[v] = B.transition(bv, bt.home_region[bv], B.region_index(bn)) * x;
                } else {
                    // home is a host region: B home frame = A frame
                    Y.vec[v] = M.transition(host_of[v], M.region_index(data[i].region), M.region_index(home)) * x;
                }
            }
        }
        for (auto [hv, s] : X->sigma) {
            int v = out.vertex_of_host[hv];
            if (v < 0 || !tn.boundary_vertex[v]) continue;
            int hh = tm.home_region[hv];
            std::string home = tn.region_names[tn.home_region[v]];
            Y.sigma[v] = M.transition(hv, hh, M.region_index(home)) * s;
        }
        out.X = Y;
    }
    return out;
}

Combing surgered_combing_in_place(const FramedMesh& M, const Combing& X, const std::vector<LPSurgeryDatum>& data,
                                  const std::vector<int>& I) {
    Combing Y = X;
    const auto& t = M.topo();
    for (int i : I) {
        const auto& d = data.at(i);
        if (!is_copy(M, d)) throw Error("InvalidArgument", "replacement of " + d.region + " is not a copy of the region");
        if (!d.XB) throw Error("InvalidArgument", "datum without replacement combing");
        auto A = extract_region(M, d.region);
        int ra = M.region_index(d.region);
        for (int v = 0; v < A.mesh.num_vertices; ++v) {
            int hv = A.vertex_to_parent[v];
            if (A.mesh.topo().boundary_vertex[v]) continue;  // X_B agrees with X there
            Y.vec[hv] = M.transition(hv, ra, t.home_region[hv]) * d.XB->vec[v];
        }
    }
    return Y;
}

bool torsion_check(const FramedMesh& M, const Combing& X, uint64_t seed) {
    auto e = euler_zero_chain(M, X, seed);
    return homology_of(M)->is_boundary(link_class_chain(M, e));
}

SurgeryClass surgery_class(const FramedMesh& M, const Combing& X, const LPSurgeryDatum& d, uint64_t seed) {
    if (!d.XB) throw Error("InvalidArgument", "datum without replacement combing");
    auto A = extract_region(M, d.region);
    auto hAB = local_h(A, d);
    // sigma on the boundary of A (frame of A), then carried to B
    std::map<int, Vec3> sig_local;
    for (auto [hv, s] : d.sigma_A) {
        auto it = A.parent_to_vertex.find(hv);
        if (it != A.parent_to_vertex.end()) sig_local[it->second] = s;
    }
    Combing XA = with_sigma(A.mesh, restrict_combing(M, X, A), sig_local);
    std::map<int, Vec3> sig_b;
    for (auto [a, b] : hAB) sig_b[b] = XA.sigma.at(a);
    Combing XB = *d.XB;
    XB.sigma = sig_b;
    for (auto& [v, s] : XB.sigma) s = s - s.dot(XB.vec[v]) * XB.vec[v];

    auto ha = homology_of(A.mesh), hb = homology_of(d.B);
    Chain eA = link_class_chain(A.mesh, euler_zero_chain(A.mesh, XA, seed));
    Chain eB = link_class_chain(d.B, euler_zero_chain(d.B, XB, seed));
    // Lift [eB] to the boundary surface of B.
    auto surfB = boundary_surface(d.B);
    Homology hs(surfB.cx);
    auto semB = surface_edge_map(surfB);
    DenseQ Mb = induced_map_h1(hs, *hb, semB);  // rank(B) x 2g
    auto target = hb->coords(eB);
    const int g2 = hs.rank1();
    const int rb = hb->rank1();
    DenseQ aug = dense_zero(rb, g2 + 1);
    for (int i = 0; i < rb; ++i) {
        for (int j = 0; j < g2; ++j) aug[i][j] = Mb[i][j];
        aug[i][g2] = target[i];
    }
    // Solve by nullspace of [Mb | -t] with last coordinate 1.
    for (int i = 0; i < rb; ++i) aug[i][g2] = -aug[i][g2];
    auto ns = dense_nullspace(aug, g2 + 1);
    std::vector<Q> x;
    for (const auto& v : ns)
        if (sgn(v[g2]) != 0) {
            x.assign(g2, 0);
            for (int j = 0; j < g2; ++j) x[j] = v[j] / v[g2];
            break;
        }
    if (x.empty() && rb > 0) {
        bool zero = true;
        for (const Q& q : target) zero = zero && sgn(q) == 0;
        if (!zero) throw Error("NotAHandlebody", "boundary of B does not surject onto H1(B)");
    }
    if (x.empty()) x.assign(g2, 0);
    Chain surf_chain;
    for (int j = 0; j < g2; ++j)
        if (sgn(x[j]) != 0) surf_chain = chain_sum(surf_chain, hs.h1_basis()[j], x[j]);
    Chain b_chain = push_chain(surf_chain, semB);
    auto emap = boundary_edge_map(A.mesh, d.B, hAB);
    Chain a_chain;
    for (auto [e, v] : b_chain) chain_add(a_chain, emap.at(e).first, v * emap.at(e).second);
    Chain diff = chain_sum(a_chain, eA, Q(-1));
    SurgeryClass sc;
    sc.coords = ha->coords(diff);
    sc.cycle = push_chain(diff, submesh_edge_map(A, M));
    return sc;
}

}  // namespace cf
