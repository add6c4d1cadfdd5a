#include "cf/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cf/errors.hpp"

namespace cf {

Cell cube_cell(const std::array<int, 8>& v, const std::array<Vec4, 8>& p, const std::string& region) {
    Cell c;
    c.verts.assign(v.begin(), v.end());
    c.pos.assign(p.begin(), p.end());
    c.region = region;
    // bit 0 = x, bit 1 = y, bit 2 = z
    const int f[6][4] = {{0, 2, 6, 4}, {1, 3, 7, 5}, {0, 1, 5, 4}, {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 5, 7, 6}};
    for (const auto& q : f) c.faces.push_back({v[q[0]], v[q[1]], v[q[2]], v[q[3]]});
    return c;
}

Cell prism_cell(const std::array<int, 6>& v, const std::array<Vec4, 6>& p, const std::string& region) {
    Cell c;
    c.verts.assign(v.begin(), v.end());
    c.pos.assign(p.begin(), p.end());
    c.region = region;
    c.faces = {{v[0], v[1], v[2]},       {v[3], v[4], v[5]},       {v[0], v[1], v[4], v[3]},
               {v[1], v[2], v[5], v[4]}, {v[2], v[0], v[3], v[5]}};
    return c;
}

CellTriangulation triangulate_cells(int num_vertices, const std::vector<Cell>& cells, bool spherical) {
    CellTriangulation out;
    FramedMesh& m = out.mesh;
    m.num_vertices = num_vertices;
    for (size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell& c = cells[ci];
        std::map<int, Vec4> pos;
        for (size_t k = 0; k < c.verts.size(); ++k) pos[c.verts[k]] = c.pos[k];
        int apex = *std::min_element(c.verts.begin(), c.verts.end());
        for (const auto& face : c.faces) {
            if (std::find(face.begin(), face.end(), apex) != face.end()) continue;
            auto mit = std::min_element(face.begin(), face.end());
            std::vector<int> cyc(mit, face.end());
            cyc.insert(cyc.end(), face.begin(), mit);
            for (size_t q = 1; q + 1 < cyc.size(); ++q) {
                std::array<int, 4> t{apex, cyc[0], cyc[q], cyc[q + 1]};
                double d;
                if (spherical) {
                    Eigen::Matrix4d M;
                    for (int a = 0; a < 4; ++a) M.col(a) = pos[t[a]];
                    d = M.determinant();
                } else {
                    Mat3 M;
                    for (int a = 0; a < 3; ++a) M.col(a) = (pos[t[a + 1]] - pos[t[0]]).head<3>();
                    d = M.determinant();
                }
                if (std::abs(d) < 1e-14) throw Error("InvalidMesh", "flat tet in cell triangulation");
                if (!c.region.empty()) m.regions[c.region].push_back(m.num_tets());
                m.tets.push_back(t);
                m.orientation.push_back(d > 0 ? 1 : -1);
                out.tet_cell.push_back(static_cast<int>(ci));
            }
        }
    }
    glue_by_vertices(m);
    m.finalize();
    return out;
}

FramedMesh single_tet() {
    FramedMesh m;
    m.num_vertices = 4;
    m.tets = {{0, 1, 2, 3}};
    m.orientation = {1};
    m.finalize();
    return m;
}

FramedMesh two_tet_s3() {
    FramedMesh m;
    m.num_vertices = 4;
    m.tets = {{0, 1, 2, 3}, {0, 1, 2, 3}};
    m.orientation = {1, -1};
    for (int i = 0; i < 4; ++i) m.glue.push_back({0, i, 1, i, {0, 1, 2, 3}});
    m.finalize();
    return m;
}

Chain edge_loop(const FramedMesh& m, const std::vector<int>& loop) {
    const auto& t = m.topo();
    std::map<std::pair<int, int>, std::vector<int>> by_pair;
    for (int e = 0; e < t.num_edges; ++e) {
        auto [a, b] = t.edge_verts[e];
        by_pair[{std::min(a, b), std::max(a, b)}].push_back(e);
    }
    Chain c;
    for (size_t k = 0; k < loop.size(); ++k) {
        int a = loop[k], b = loop[(k + 1) % loop.size()];
        auto it = by_pair.find({std::min(a, b), std::max(a, b)});
        if (it == by_pair.end() || it->second.size() != 1)
            throw Error("InvalidArgument", "no unique edge between " + std::to_string(a) + " and " + std::to_string(b));
        int e = it->second[0];
        chain_add(c, e, Q(t.edge_verts[e][0] == a ? 1 : -1));
    }
    return c;
}

int SolidTorus::vid(int i, int j, int k) const { return ((((k % m) + m) % m) * (w + 1) + j) * (w + 1) + i; }

std::vector<int> SolidTorus::meridian_loop(int k) const {
    std::vector<int> loop;
    for (int i = 0; i < w; ++i) loop.push_back(vid(i, 0, k));
    for (int j = 0; j < w; ++j) loop.push_back(vid(w, j, k));
    for (int i = w; i > 0; --i) loop.push_back(vid(i, w, k));
    for (int j = w; j > 0; --j) loop.push_back(vid(0, j, k));
    return loop;
}

std::vector<int> SolidTorus::longitude_loop(int i, int j) const {
    std::vector<int> loop;
    for (int k = 0; k < m; ++k) loop.push_back(vid(i, j, k));
    return loop;
}

SolidTorus solid_torus(int w, int m, const std::string& region) {
    if (w < 1 || m < 3) throw Error("InvalidArgument", "solid torus needs w >= 1, m >= 3");
    SolidTorus st;
    st.w = w;
    st.m = m;
    int nv = (w + 1) * (w + 1) * m;
    st.ijk.resize(nv);
    for (int k = 0; k < m; ++k)
        for (int j = 0; j <= w; ++j)
            for (int i = 0; i <= w; ++i) st.ijk[st.vid(i, j, k)] = {i, j, k};
    std::vector<Cell> cells;
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < w; ++j)
            for (int i = 0; i < w; ++i) {
                std::array<int, 8> v{};
                std::array<Vec4, 8> p{};
                for (int b = 0; b < 8; ++b) {
                    int di = b & 1, dj = (b >> 1) & 1, dk = (b >> 2) & 1;
                    v[b] = st.vid(i + di, j + dj, k + dk);
                    p[b] = Vec4(i + di, j + dj, k + dk, 0);
                }
                cells.push_back(cube_cell(v, p, region));
            }
    st.mesh = triangulate_cells(nv, cells, false).mesh;
    return st;
}

FramedMesh genus2_handlebody() {
    // 5 x 3 grid of squares with holes at (1,1) and (3,1), one layer thick.
    const int W = 5, H = 3;
    auto vid = [&](int i, int j, int z) { return (z * (H + 1) + j) * (W + 1) + i; };
    std::vector<Cell> cells;
    for (int j = 0; j < H; ++j)
        for (int i = 0; i < W; ++i) {
            if (j == 1 && (i == 1 || i == 3)) continue;
            std::array<int, 8> v{};
            std::array<Vec4, 8> p{};
            for (int b = 0; b < 8; ++b) {
                int di = b & 1, dj = (b >> 1) & 1, dz = (b >> 2) & 1;
                v[b] = vid(i + di, j + dj, dz);
                p[b] = Vec4(i + di, j + dj, dz, 0);
            }
            cells.push_back(cube_cell(v, p, "M"));
        }
    auto ct = triangulate_cells((W + 1) * (H + 1) * 2, cells, false);
    return ct.mesh;
}

S2xS1 s2_x_s1(int m) {
    if (m < 3) throw Error("InvalidArgument", "need m >= 3");
    const std::array<Vec3, 6> oct{Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0), Vec3(0, 0, 1), Vec3(0, 0, -1)};
    const int tri[8][3] = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    S2xS1 s;
    auto vid = [&](int p, int k) { return ((k % m + m) % m) * 6 + p; };
    std::vector<Cell> cells;
    for (int k = 0; k < m; ++k)
        for (const auto& t : tri) {
            std::array<int, 6> v{};
            std::array<Vec4, 6> p{};
            for (int q = 0; q < 3; ++q) {
                v[q] = vid(t[q], k);
                v[q + 3] = vid(t[q], k + 1);
                Vec3 a = oct[t[q]] * (1.0 + k), b = oct[t[q]] * (2.0 + k);
                p[q] = Vec4(a.x(), a.y(), a.z(), 0);
                p[q + 3] = Vec4(b.x(), b.y(), b.z(), 0);
            }
            cells.push_back(prism_cell(v, p, "M"));
        }
    s.mesh = triangulate_cells(6 * m, cells, false).mesh;
    s.sphere_point.resize(6 * m);
    s.layer.resize(6 * m);
    for (int k = 0; k < m; ++k)
        for (int p = 0; p < 6; ++p) {
            s.sphere_point[vid(p, k)] = oct[p];
            s.layer[vid(p, k)] = k;
        }
    return s;
}

int HopfMesh::vid(int i, int j, int l) const {
    const int n = cfg.n, k = cfg.k;
    j = ((j % n) + n) % n;
    i = ((i % n) + n) % n;
    if (l == 0) return j;
    if (l == k) return n + n * n * (k - 1) + i;
    return n + ((l - 1) * n + j) * n + i;
}

HopfMesh hopf_s3(const HopfConfig& cfg) {
    const int n = cfg.n, k = cfg.k, a = cfg.a;
    if (n < 3 || k < 3 || a < 1 || 2 * a >= k) throw Error("InvalidArgument", "bad Hopf mesh parameters");
    HopfMesh h;
    h.cfg = cfg;
    const int nv = 2 * n + n * n * (k - 1);
    h.pos.resize(nv);
    h.ijl.resize(nv);
    auto point = [&](double phi1, double phi2, double r) {
        return Vec4(std::sqrt(r) * std::cos(phi1), std::sqrt(r) * std::sin(phi1), std::sqrt(1 - r) * std::cos(phi2),
                    std::sqrt(1 - r) * std::sin(phi2));
    };
    const double step = 2 * M_PI / n;
    for (int j = 0; j < n; ++j) {
        h.pos[h.vid(0, j, 0)] = point(0, j * step, 0);
        h.ijl[h.vid(0, j, 0)] = {-1, j, 0};
    }
    for (int i = 0; i < n; ++i) {
        h.pos[h.vid(i, 0, k)] = point(i * step, 0, 1);
        h.ijl[h.vid(i, 0, k)] = {i, -1, k};
    }
    for (int l = 1; l < k; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                h.pos[h.vid(i, j, l)] = point(i * step, j * step, double(l) / k);
                h.ijl[h.vid(i, j, l)] = {i, j, l};
            }
    auto in_third = [&](int j, int l) {
        if (!cfg.third_tube) return false;
        int jj = ((j - cfg.third_j0) % n + n) % n;
        return jj < cfg.third_w && l >= cfg.third_l0 && l < cfg.third_l0 + cfg.third_w;
    };
    auto region_of = [&](int j, int l0, int l1) -> std::string {
        if (l1 <= a) return "A2";
        if (l0 >= k - a) return "A1";
        if (in_third(j, l0)) return "A3";
        return "ext";
    };
    std::vector<Cell> cells;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            // Bottom prism around core2.
            {
                std::array<int, 6> v{h.vid(0, j, 0),     h.vid(i, j, 1),     h.vid(i + 1, j, 1),
                                     h.vid(0, j + 1, 0), h.vid(i, j + 1, 1), h.vid(i + 1, j + 1, 1)};
                std::array<Vec4, 6> p{point(0, j * step, 0),       point(i * step, j * step, 1.0 / k),
                                      point((i + 1) * step, j * step, 1.0 / k), point(0, (j + 1) * step, 0),
                                      point(i * step, (j + 1) * step, 1.0 / k), point((i + 1) * step, (j + 1) * step, 1.0 / k)};
                cells.push_back(prism_cell(v, p, region_of(j, 0, 1)));
            }
            // Top prism around core1.
            {
                std::array<int, 6> v{h.vid(i, 0, k),     h.vid(i, j, k - 1),     h.vid(i, j + 1, k - 1),
                                     h.vid(i + 1, 0, k), h.vid(i + 1, j, k - 1), h.vid(i + 1, j + 1, k - 1)};
                const double r = double(k - 1) / k;
                std::array<Vec4, 6> p{point(i * step, 0, 1),       point(i * step, j * step, r),
                                      point(i * step, (j + 1) * step, r), point((i + 1) * step, 0, 1),
                                      point((i + 1) * step, j * step, r), point((i + 1) * step, (j + 1) * step, r)};
                cells.push_back(prism_cell(v, p, region_of(j, k - 1, k)));
            }
            for (int l = 1; l + 1 < k; ++l) {
                std::array<int, 8> v{};
                std::array<Vec4, 8> p{};
                for (int b = 0; b < 8; ++b) {
                    int di = b & 1, dj = (b >> 1) & 1, dl = (b >> 2) & 1;
                    v[b] = h.vid(i + di, j + dj, l + dl);
                    p[b] = point((i + di) * step, (j + dj) * step, double(l + dl) / k);
                }
                cells.push_back(cube_cell(v, p, region_of(j, l, l + 1)));
            }
        }
    h.mesh = triangulate_cells(nv, cells, true).mesh;

    for (int i = 0; i < n; ++i) h.core1.push_back(h.vid(i, 0, k));
    for (int j = 0; j < n; ++j) h.core2.push_back(h.vid(0, j, 0));

    // Tube charts: disk polar coordinates with the circle factor last.
    auto region_vertices = [&](const std::string& r) {
        std::set<int> vs;
        for (int t : h.mesh.regions.at(r))
            for (int q : h.mesh.tets[t]) vs.insert(q);
        return std::vector<int>(vs.begin(), vs.end());
    };
    {
        TubeChart A1;
        A1.region = "A1";
        A1.vertices = region_vertices("A1");
        for (int v : A1.vertices) {
            auto [i, j, l] = h.ijl[v];
            A1.rho.push_back(double(k - l) / a);
            A1.angle.push_back(j < 0 ? 0.0 : j * step);
        }
        A1.core = h.core1;
        h.tubes.push_back(A1);
        TubeChart A2;
        A2.region = "A2";
        A2.vertices = region_vertices("A2");
        for (int v : A2.vertices) {
            auto [i, j, l] = h.ijl[v];
            A2.rho.push_back(double(l) / a);
            A2.angle.push_back(i < 0 ? 0.0 : i * step);
        }
        A2.core = h.core2;
        h.tubes.push_back(A2);
    }
    if (cfg.third_tube) {
        TubeChart A3;
        A3.region = "A3";
        A3.vertices = region_vertices("A3");
        const double half = cfg.third_w / 2.0;
        for (int v : A3.vertices) {
            auto [i, j, l] = h.ijl[v];
            double dj = ((j - cfg.third_j0) % n + n) % n - half, dl = l - cfg.third_l0 - half;
            A3.rho.push_back(std::max(std::abs(dj), std::abs(dl)) / half);
            A3.angle.push_back(std::atan2(dl, dj));
        }
        if (cfg.third_w % 2 == 0)
            for (int i = 0; i < n; ++i) A3.core.push_back(h.vid(i, cfg.third_j0 + cfg.third_w / 2, cfg.third_l0 + cfg.third_w / 2));
        h.tubes.push_back(A3);
    }
    return h;
}

Chain HopfMesh::seifert_disk_core2() const {
    const int n = cfg.n, k = cfg.k;
    const auto& t = mesh.topo();
    // Parameter coordinates (j, l) in the half-disk phi1 = 0; d_0 sits at l = k.
    auto in_disk = [&](int v) {
        auto [i, j, l] = ijl[v];
        if (l == 0) return true;
        if (l == k) return i == 0;
        return i == 0;
    };
    Chain c;
    for (int f = 0; f < t.num_faces; ++f) {
        const auto& fv = t.face_verts[f];
        if (!in_disk(fv[0]) || !in_disk(fv[1]) || !in_disk(fv[2])) continue;
        // Unwrap j around the first vertex that has one.
        int jref = -1;
        for (int v : fv)
            if (ijl[v][2] != k && jref < 0) jref = ijl[v][1];
        std::array<Eigen::Vector2d, 3> p;
        double jsum = 0;
        int cnt = 0;
        for (int q = 0; q < 3; ++q) {
            auto [i, j, l] = ijl[fv[q]];
            if (l == k) continue;
            int d = ((j - jref) % n + n) % n;
            if (d > n / 2) d -= n;
            p[q] = Eigen::Vector2d(jref + d, l);
            jsum += jref + d;
            ++cnt;
        }
        for (int q = 0; q < 3; ++q)
            if (ijl[fv[q]][2] == k) p[q] = Eigen::Vector2d(jsum / cnt, k);
        // Orientation (d/dphi2, d/dr) is positive for this disk.
        double det = (p[1] - p[0]).x() * (p[2] - p[0]).y() - (p[1] - p[0]).y() * (p[2] - p[0]).x();
        c[f] = Q(det > 0 ? 1 : -1);
    }
    return c;
}

}  // namespace cf
