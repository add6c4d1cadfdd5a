#include "cf/coincidence.hpp"

#include <cmath>
#include <optional>
#include <random>

#include "cf/errors.hpp"
#include "cf/parallel.hpp"

namespace cf {

size_t PLLink::num_segments() const {
    size_t n = 0;
    for (const auto& l : loops) n += l.segs.size();
    return n;
}

PLLink reversed(const PLLink& L) {
    PLLink out;
    for (const auto& l : L.loops) {
        Loop r;
        r.mult = l.mult;
        for (auto it = l.segs.rbegin(); it != l.segs.rend(); ++it) {
            Segment s = *it;
            std::swap(s.in, s.out);
            std::swap(s.in_face, s.out_face);
            r.segs.push_back(s);
        }
        out.loops.push_back(r);
    }
    return out;
}

PLLink scaled(const PLLink& L, const Q& q) {
    PLLink out = L;
    for (auto& l : out.loops) l.mult *= q;
    return out;
}

PLLink link_union(const PLLink& a, const PLLink& b) {
    PLLink out = a;
    out.loops.insert(out.loops.end(), b.loops.begin(), b.loops.end());
    return out;
}

namespace {

struct FaceZero {
    bool has = false;
    int cls = 0;
    int jac = 0;  // sign of the chart Jacobian in canonical corner order
    std::array<Q, 3> lambda;
};

inline Q cross2(const std::array<Q, 2>& p, const std::array<Q, 2>& q) { return p[0] * q[1] - p[1] * q[0]; }

// Oriented angle from v to w in the plane normal to x.
double plane_angle(const Vec3& x, const Vec3& v, const Vec3& w) { return std::atan2(x.dot(v.cross(w)), v.dot(w)); }

// Rotation of minimal angle taking a to b, applied to v.
Vec3 transport(const Vec3& a, const Vec3& b, const Vec3& v) {
    return Eigen::Quaterniond::FromTwoVectors(a, b) * v;
}

// Barycentric position of the zero in a chart normal to the mean of X; nullopt
// when the chart does not place it strictly inside.
std::optional<std::array<Q, 3>> chart_zero(const std::array<Vec3, 3>& x, const std::array<Vec3, 3>& z) {
    Vec3 n = (x[0] + x[1] + x[2]).normalized();
    int k = 0;
    for (int c = 1; c < 3; ++c)
        if (std::abs(n[c]) < std::abs(n[k])) k = c;
    Vec3 e = Vec3::Unit(k);
    Vec3 a = (e - e.dot(n) * n).normalized();
    Vec3 b = n.cross(a);
    std::array<std::array<Q, 2>, 3> u;
    for (int q = 0; q < 3; ++q) u[q] = {exact(a.dot(z[q])), exact(b.dot(z[q]))};
    std::array<Q, 3> D{cross2(u[1], u[2]), cross2(u[2], u[0]), cross2(u[0], u[1])};
    Q sum = D[0] + D[1] + D[2];
    if (sgn(sum) == 0) return std::nullopt;
    std::array<Q, 3> lam;
    for (int q = 0; q < 3; ++q) {
        lam[q] = D[q] / sum;
        if (sgn(lam[q]) <= 0) return std::nullopt;
    }
    return lam;
}

// The signed count of zeros of the section on a face is the winding of s along
// its boundary, measured against minimal-rotation transport of X^perp; the
// holonomy of that transport is removed so that the counts on the four faces of
// a tet always cancel.
FaceZero face_zero(const FramedMesh& m, int f, const std::vector<Vec3>& X, const std::vector<Vec3>& s,
                   const std::vector<double>* cls) {
    const auto& t = m.topo();
    auto [tt, i] = t.face_tets[f][0];
    int region = t.region_of_tet[tt];
    const auto& fv = t.face_verts[f];
    std::array<Vec3, 3> x, z;
    for (int q = 0; q < 3; ++q) {
        x[q] = in_region(m, X, fv[q], region).normalized();
        z[q] = in_region(m, s, fv[q], region);
        z[q] -= z[q].dot(x[q]) * x[q];
        if (z[q].norm() == 0.0) throw Error("Degenerate", "section vanishes at vertex " + std::to_string(fv[q]));
    }
    for (int q = 0; q < 3; ++q)
        if (x[q].dot(x[(q + 1) % 3]) < 0.0)
            throw Error("Degenerate", "combing varies too much across face " + std::to_string(f) + " (mesh too coarse)");
    double turn = 0;
    for (int q = 0; q < 3; ++q) {
        int r = (q + 1) % 3;
        turn += plane_angle(x[r], transport(x[q], x[r], z[q]), z[r]);
    }
    Vec3 ref = z[0].normalized();
    Vec3 h = transport(x[2], x[0], transport(x[1], x[2], transport(x[0], x[1], ref)));
    double hol = plane_angle(x[0], ref, h);
    double w = (turn + hol) / (2 * M_PI);
    long W = std::lround(w);
    if (std::abs(w - static_cast<double>(W)) > 1e-6) throw Error("Degenerate", "winding not resolved on face " + std::to_string(f));
    FaceZero out;
    if (W == 0) return out;
    if (std::abs(W) > 1) throw Error("Degenerate", "several zeros on face " + std::to_string(f));
    if (t.boundary_face[f]) throw Error("Degenerate", "zero set meets the boundary at face " + std::to_string(f));
    out.has = true;
    out.jac = static_cast<int>(W);
    auto lam = chart_zero(x, z);
    out.lambda = lam ? *lam : std::array<Q, 3>{Q(1, 3), Q(1, 3), Q(1, 3)};
    if (cls) {
        double c = 0;
        for (int q = 0; q < 3; ++q) c += out.lambda[q].get_d() * (*cls)[fv[q]];
        if (std::abs(c) < 0.5) throw Error("Degenerate", "cannot classify zero on face " + std::to_string(f));
        out.cls = c > 0 ? 0 : 1;
    }
    return out;
}

}  // namespace

std::vector<PLLink> zero_links(const FramedMesh& m, const std::vector<Vec3>& X, const std::vector<Vec3>& s,
                               const std::vector<double>* cls) {
    const auto& t = m.topo();
    const int F = t.num_faces, T = m.num_tets();
    const int ncls = cls ? 2 : 1;
    std::vector<FaceZero> fz(F);
    parallel_for(F, [&](int b, int e) {
        for (int f = b; f < e; ++f) fz[f] = face_zero(m, f, X, s, cls);
    });
    std::vector<std::vector<Segment>> segs(ncls);
    for (int tt = 0; tt < T; ++tt) {
        std::array<std::vector<int>, 2> ins, outs;
        for (int i = 0; i < 4; ++i) {
            const FaceZero& z = fz[t.tet_face[tt][i]];
            if (!z.has) continue;
            if (t.tet_face_sign[tt][i] * z.jac > 0)
                outs[z.cls].push_back(i);
            else
                ins[z.cls].push_back(i);
        }
        for (int c = 0; c < ncls; ++c) {
            if (ins[c].size() != outs[c].size())
                throw Error("Degenerate", "unpaired crossings in tet " + std::to_string(tt));
            // Two strands through one tet: any pairing gives the same class.
            for (size_t p = 0; p < ins[c].size(); ++p) {
                Segment sg;
                sg.tet = tt;
                sg.in_face = ins[c][p];
                sg.out_face = outs[c][p];
                auto fill = [&](int i, std::array<Q, 4>& pt) {
                    const FaceZero& z = fz[t.tet_face[tt][i]];
                    for (int a = 0; a < 4; ++a) pt[a] = 0;
                    for (int q = 0; q < 3; ++q) pt[t.tet_face_corner[tt][i][q]] = z.lambda[q];
                };
                fill(sg.in_face, sg.in);
                fill(sg.out_face, sg.out);
                segs[c].push_back(sg);
            }
        }
    }
    std::vector<PLLink> out(ncls);
    for (int c = 0; c < ncls; ++c) {
        const auto& S = segs[c];
        std::map<int, int> entering;  // global face -> segment
        for (size_t k = 0; k < S.size(); ++k) entering[t.tet_face[S[k].tet][S[k].in_face]] = static_cast<int>(k);
        std::vector<bool> used(S.size(), false);
        for (size_t k0 = 0; k0 < S.size(); ++k0) {
            if (used[k0]) continue;
            Loop loop;
            int k = static_cast<int>(k0);
            while (!used[k]) {
                used[k] = true;
                loop.segs.push_back(S[k]);
                auto it = entering.find(t.tet_face[S[k].tet][S[k].out_face]);
                if (it == entering.end()) throw Error("Degenerate", "open zero curve");
                k = it->second;
            }
            if (k != static_cast<int>(k0)) throw Error("Degenerate", "zero curve does not close");
            out[c].loops.push_back(std::move(loop));
        }
    }
    return out;
}

CoincidenceLinks coincidence_links(const FramedMesh& m, const Combing& X, const Combing& Y) {
    const auto& t = m.topo();
    const int V = m.num_vertices;
    if (static_cast<int>(X.vec.size()) != V || static_cast<int>(Y.vec.size()) != V)
        throw Error("InvalidArgument", "combing size mismatch");
    std::vector<Vec3> z(V);
    std::vector<double> c(V);
    for (int v = 0; v < V; ++v) {
        c[v] = X.vec[v].dot(Y.vec[v]);
        if (t.boundary_vertex[v]) {
            if ((X.vec[v] - Y.vec[v]).norm() > 1e-12) throw Error("BoundaryMismatch", "X != Y at boundary vertex " + std::to_string(v));
            auto it = X.sigma.find(v);
            if (it == X.sigma.end()) throw Error("SigmaVanishes", "missing sigma at boundary vertex " + std::to_string(v));
            z[v] = kBoundaryEta * it->second;
        } else {
            z[v] = Y.vec[v] - c[v] * X.vec[v];
        }
    }
    auto links = zero_links(m, X.vec, z, &c);
    return {links[0], links[1]};
}

PLLink coincidence_link(const FramedMesh& m, const Combing& X, const Combing& Y, int sign) {
    auto L = coincidence_links(m, X, Y);
    return sign > 0 ? L.plus : L.minus;
}

PLLink euler_zero_chain(const FramedMesh& m, const Combing& X, uint64_t seed) {
    const auto& t = m.topo();
    const int V = m.num_vertices;
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::mt19937_64 rng(seed * 0xD1B54A32D192ED03ULL + attempt);
        std::normal_distribution<double> N(0, 1);
        std::vector<Vec3> s(V);
        for (int v = 0; v < V; ++v) {
            Vec3 r(N(rng), N(rng), N(rng));
            const Vec3& x = X.vec[v];
            if (t.boundary_vertex[v]) {
                auto it = X.sigma.find(v);
                if (it == X.sigma.end() || it->second.norm() < 1e-9)
                    throw Error("SigmaVanishes", "sigma missing or zero at vertex " + std::to_string(v));
                s[v] = it->second;
                continue;
            }
            Vec3 e2(0, 1, 0);
            s[v] = (e2 - e2.dot(x) * x) + 1e-4 * (r - r.dot(x) * x);
        }
        try {
            return zero_links(m, X.vec, s, nullptr)[0];
        } catch (const Error& e) {
            if (e.kind() != "Degenerate" || attempt == 7) throw;
        }
    }
    throw Error("Degenerate", "unreachable");
}

}  // namespace cf
