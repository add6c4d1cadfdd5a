#include "cf/pseudopar.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <random>

#include "cf/errors.hpp"
#include "cf/linking.hpp"
#include "cf/parallel.hpp"
#include "cf/surgery.hpp"

namespace cf {

namespace {

using Quat = Eigen::Quaterniond;

Quat rot_e1(double alpha) { return Quat(std::cos(alpha / 2), std::sin(alpha / 2), 0, 0); }

// Prescribed value of F on the collar, nullopt in the free core.
std::optional<Quat> prescribed(const PseudoParModel& m, double t, double u) {
    const auto& c = m.cfg;
    const double tiny = 1e-12;
    if (std::abs(u) >= 1 - c.eps - tiny) return Quat::Identity();
    if (t <= c.a + c.eps + tiny) return rot_e1(M_PI + m.theta(u));
    if (t >= c.b - c.eps - tiny) return c.corrupt ? Quat::Identity() : rot_e1(-M_PI - m.theta(u));
    return std::nullopt;
}

Quat aligned(const Quat& q, const Quat& ref) {
    return q.coeffs().dot(ref.coeffs()) < 0 ? Quat(-q.coeffs()) : q;
}

double plane_angle(const Vec3& x, const Vec3& v, const Vec3& w) { return std::atan2(x.dot(v.cross(w)), v.dot(w)); }

}  // namespace

double PseudoParModel::t_at(int it) const { return cfg.a + (cfg.b - cfg.a) * it / (cfg.grid_t - 1); }
double PseudoParModel::u_at(int iu) const { return -1.0 + 2.0 * iu / (cfg.grid_u - 1); }

double PseudoParModel::theta(double u) const {
    const double e = 1 - cfg.eps;
    if (u <= -e) return -M_PI;
    if (u >= e) return M_PI;
    double x = u / e;
    return M_PI * x * (3 - x * x) / 2;
}

Mat3 PseudoParModel::T(double u) const { return rot_e1(M_PI + theta(u)).toRotationMatrix(); }

Quat PseudoParModel::F_at(double t, double u) const {
    const int nt = cfg.grid_t, nu = cfg.grid_u;
    double st = std::clamp((t - cfg.a) / (cfg.b - cfg.a), 0.0, 1.0) * (nt - 1);
    double su = std::clamp((u + 1) / 2, 0.0, 1.0) * (nu - 1);
    int it = std::min(static_cast<int>(st), nt - 2), iu = std::min(static_cast<int>(su), nu - 2);
    double ft = st - it, fu = su - iu;
    const Quat& q00 = F[it * nu + iu];
    Quat q10 = aligned(F[(it + 1) * nu + iu], q00), q01 = aligned(F[it * nu + iu + 1], q00),
         q11 = aligned(F[(it + 1) * nu + iu + 1], q00);
    Eigen::Vector4d c = (1 - ft) * (1 - fu) * q00.coeffs() + ft * (1 - fu) * q10.coeffs() + (1 - ft) * fu * q01.coeffs() +
                        ft * fu * q11.coeffs();
    Quat q(c.normalized());
    return q;
}

Vec3 PseudoParModel::e1g(double t, double u) const { return rot_e1(-M_PI - theta(u)) * (F_at(t, u) * Vec3::UnitX()); }

int lift_holonomy(const PseudoParConfig& cfg) {
    PseudoParModel m;
    m.cfg = cfg;
    const int nt = cfg.grid_t, nu = cfg.grid_u;
    // Perimeter of the grid, counterclockwise in (u, t).
    std::vector<std::pair<int, int>> path;
    for (int iu = 0; iu < nu - 1; ++iu) path.push_back({0, iu});
    for (int it = 0; it < nt - 1; ++it) path.push_back({it, nu - 1});
    for (int iu = nu - 1; iu > 0; --iu) path.push_back({nt - 1, iu});
    for (int it = nt - 1; it > 0; --it) path.push_back({it, 0});
    path.push_back(path.front());
    auto val = [&](std::pair<int, int> p) { return *prescribed(m, m.t_at(p.first), m.u_at(p.second)); };
    Quat start = val(path.front()), cur = start;
    for (size_t k = 1; k < path.size(); ++k) cur = aligned(val(path[k]), cur);
    return cur.coeffs().dot(start.coeffs()) > 0 ? 1 : -1;
}

PseudoParModel build_model(const PseudoParConfig& cfg) {
    if (cfg.grid_t < 5 || cfg.grid_u < 5 || !(cfg.b > cfg.a) || !(cfg.eps > 0) || cfg.eps >= 0.5 * std::min(1.0, cfg.b - cfg.a))
        throw Error("InvalidArgument", "bad pseudo-parallelization parameters");
    if (lift_holonomy(cfg) != 1) throw Error("LiftObstruction", "boundary rotations do not lift to a closed loop in SU(2)");
    PseudoParModel m;
    m.cfg = cfg;
    const int nt = cfg.grid_t, nu = cfg.grid_u;
    auto id = [&](int it, int iu) { return it * nu + iu; };
    m.F.assign(nt * nu, Quat::Identity());
    std::vector<char> fixed(nt * nu, 0);
    for (int it = 0; it < nt; ++it)
        for (int iu = 0; iu < nu; ++iu)
            if (auto q = prescribed(m, m.t_at(it), m.u_at(iu))) {
                m.F[id(it, iu)] = *q;
                fixed[id(it, iu)] = 1;
            }
    // Lift the collar by continuation from a corner.
    std::vector<char> seen(nt * nu, 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    const int dt[4] = {1, -1, 0, 0}, du[4] = {0, 0, 1, -1};
    while (!bfs.empty()) {
        int c = bfs.front();
        bfs.pop();
        int it = c / nu, iu = c % nu;
        for (int d = 0; d < 4; ++d) {
            int jt = it + dt[d], ju = iu + du[d];
            if (jt < 0 || jt >= nt || ju < 0 || ju >= nu) continue;
            int n = id(jt, ju);
            if (!fixed[n] || seen[n]) continue;
            seen[n] = 1;
            m.F[n] = aligned(m.F[n], m.F[c]);
            bfs.push(n);
        }
    }
    for (int it = 0; it < nt; ++it)
        for (int iu = 0; iu < nu; ++iu)
            for (int d = 0; d < 4; d += 2) {
                int jt = it + (d == 0), ju = iu + (d == 2);
                if (jt >= nt || ju >= nu || !fixed[id(it, iu)] || !fixed[id(jt, ju)]) continue;
                if (m.F[id(it, iu)].coeffs().dot(m.F[id(jt, ju)].coeffs()) <= 0)
                    throw Error("LiftObstruction", "collar lift is not continuous");
            }
    // Coons patch over the free core, pushed off the boundary great circle.
    int t0 = nt, t1 = -1, u0 = nu, u1 = -1;
    for (int it = 0; it < nt; ++it)
        for (int iu = 0; iu < nu; ++iu)
            if (!fixed[id(it, iu)]) {
                t0 = std::min(t0, it), t1 = std::max(t1, it);
                u0 = std::min(u0, iu), u1 = std::max(u1, iu);
            }
    if (t1 < 0) throw Error("InvalidArgument", "collar covers the whole square");
    const int ta = t0 - 1, tb = t1 + 1, ua = u0 - 1, ub = u1 + 1;
    auto C = [&](int it, int iu) { return m.F[id(it, iu)].coeffs(); };
    for (int it = t0; it <= t1; ++it)
        for (int iu = u0; iu <= u1; ++iu) {
            double s = double(it - ta) / (tb - ta), r = double(iu - ua) / (ub - ua);
            Eigen::Vector4d c = (1 - s) * C(ta, iu) + s * C(tb, iu) + (1 - r) * C(it, ua) + r * C(it, ub) -
                                ((1 - s) * (1 - r) * C(ta, ua) + s * (1 - r) * C(tb, ua) + (1 - s) * r * C(ta, ub) +
                                 s * r * C(tb, ub));
            c += Eigen::Vector4d(0, 0, 1, 0) * std::sin(M_PI * s) * std::sin(M_PI * r);  // +j
            m.F[id(it, iu)] = Quat(c.normalized());
        }
    // Red-black relaxation towards the discrete harmonic map into S^3.
    for (m.sweeps = 0; m.sweeps < cfg.max_sweeps; ++m.sweeps) {
        double res = 0;
        for (int color = 0; color < 2; ++color) {
            std::vector<double> part(t1 - t0 + 1, 0.0);
            parallel_for(t1 - t0 + 1, [&](int b, int e) {
                for (int k = b; k < e; ++k) {
                    int it = t0 + k;
                    for (int iu = u0; iu <= u1; ++iu) {
                        if ((it + iu) % 2 != color) continue;
                        Eigen::Vector4d c = C(it - 1, iu) + C(it + 1, iu) + C(it, iu - 1) + C(it, iu + 1);
                        Eigen::Vector4d q = c.normalized();
                        part[k] = std::max(part[k], (q - C(it, iu)).norm());
                        m.F[id(it, iu)] = Quat(q);
                    }
                }
            });
            for (double p : part) res = std::max(res, p);
        }
        m.residual = res;
        if (res < cfg.tol) break;
    }
    if (m.residual >= cfg.tol) throw Error("Degenerate", "relaxation did not converge");
    return m;
}

int meridian_degree(const PseudoParModel& model, char which, int samples) {
    if (which != 'd' && which != 'g') throw Error("InvalidArgument", "which must be d or g");
    const double a = model.cfg.a, b = model.cfg.b;
    std::vector<std::pair<double, double>> pts;  // (t, u), counterclockwise in (u, t)
    for (int k = 0; k < samples; ++k) pts.push_back({a, -1 + 2.0 * k / samples});
    for (int k = 0; k < samples; ++k) pts.push_back({a + (b - a) * k / samples, 1});
    for (int k = 0; k < samples; ++k) pts.push_back({b, 1 - 2.0 * k / samples});
    for (int k = 0; k < samples; ++k) pts.push_back({b - (b - a) * k / samples, -1});
    pts.push_back(pts.front());
    auto vec = [&](double t, double u) {
        Vec3 e2 = Vec3::UnitY();
        Vec3 vd = t >= b ? Vec3(model.T(u).transpose() * e2) : e2;
        if (which == 'd') return vd;
        return Vec3(model.F_at(t, u).inverse() * (model.T(u) * vd));
    };
    double total = 0;
    Vec3 prev = vec(pts[0].first, pts[0].second);
    for (size_t k = 1; k < pts.size(); ++k) {
        Vec3 cur = vec(pts[k].first, pts[k].second);
        total += plane_angle(Vec3::UnitX(), prev, cur);
        prev = cur;
    }
    return static_cast<int>(std::lround(total / (2 * M_PI)));
}

namespace {

double warp(double x) { return x + kHostWarp * std::sin(2 * M_PI * x) / (2 * M_PI); }

void set_coordinates(ModelHost& h, const PseudoParModel& m) {
    h.ts.resize(h.nt);
    h.us.resize(h.nu);
    for (int i = 0; i < h.nt; ++i) h.ts[i] = m.cfg.a + (m.cfg.b - m.cfg.a) * warp(double(i) / (h.nt - 1));
    for (int i = 0; i < h.nu; ++i) h.us[i] = -1 + 2 * warp(double(i) / (h.nu - 1));
}

// Moves the tets in `tets` to region N and twists the frame on the side t = b.
void install_region(ModelHost& h, const PseudoParModel& model, const std::vector<int>& tets, const std::string& outer) {
    set_coordinates(h, model);
    h.mesh = carve_region(h.mesh, "N", tets);
    std::map<int, double> seam;  // vertex -> u
    for (int iu = 0; iu < h.nu; ++iu)
        for (int ic = 0; ic < h.nc; ++ic) seam[h.vertex(h.nt - 1, iu, ic)] = h.u_of(iu);
    std::erase_if(h.mesh.transitions, [&](const Transition& tr) {
        return seam.count(tr.vertex) && (tr.from == "N" || tr.to == "N");
    });
    for (auto [v, u] : seam) h.mesh.transitions.push_back({v, "N", outer, model.T(u)});
    h.mesh.finalize();
}

}  // namespace

ModelHost solid_torus_host(const PseudoParModel& model, int w, int m, int p) {
    if (w - 2 * p < 2 || p < 1) throw Error("InvalidArgument", "host needs w - 2p >= 2 and p >= 1");
    SolidTorus st = solid_torus(w, m, "ext");
    ModelHost h;
    h.mesh = st.mesh;
    h.nt = h.nu = w - 2 * p + 1;
    h.nc = m;
    h.lattice.resize(h.nt * h.nu * h.nc);
    // t along j, u along i, c along k: (t, c, u) is positively oriented.
    for (int it = 0; it < h.nt; ++it)
        for (int iu = 0; iu < h.nu; ++iu)
            for (int ic = 0; ic < m; ++ic) h.lattice[(it * h.nu + iu) * m + ic] = st.vid(p + iu, p + it, ic);
    std::vector<int> tets;
    for (int t = 0; t < st.mesh.num_tets(); ++t) {
        double ci = 0, cj = 0;
        for (int v : st.mesh.tets[t]) ci += st.ijk[v][0] / 4.0, cj += st.ijk[v][1] / 4.0;
        if (ci > p && ci < w - p && cj > p && cj < w - p) tets.push_back(t);
    }
    install_region(h, model, tets, "ext");
    h.gamma = edge_loop(h.mesh, st.longitude_loop(w / 2, w / 2));
    return h;
}

ModelHost s3_host(const PseudoParModel& model, int width, int n) {
    if (width < 2 || width % 2) throw Error("InvalidArgument", "host width must be even and >= 2");
    HopfConfig cfg;
    cfg.n = n;
    cfg.a = 2;
    cfg.third_tube = true;
    cfg.third_j0 = 4;
    cfg.third_l0 = 4;
    cfg.third_w = width;
    cfg.k = cfg.third_l0 + width + 4;
    HopfMesh hm = hopf_s3(cfg);
    ModelHost h;
    h.mesh = hm.mesh;
    h.nt = h.nu = width + 1;
    h.nc = cfg.n;
    h.lattice.resize(h.nt * h.nu * h.nc);
    // t along l, u along j, c along i.
    for (int it = 0; it < h.nt; ++it)
        for (int iu = 0; iu < h.nu; ++iu)
            for (int ic = 0; ic < h.nc; ++ic)
                h.lattice[(it * h.nu + iu) * h.nc + ic] = hm.vid(ic, cfg.third_j0 + iu, cfg.third_l0 + it);
    install_region(h, model, hm.mesh.regions.at("A3"), "ext");
    std::vector<int> core;
    for (int i = 0; i < cfg.n; ++i) core.push_back(hm.vid(i, cfg.third_j0 + width / 2, cfg.third_l0 + width / 2));
    h.gamma = edge_loop(h.mesh, core);
    return h;
}

Siamese siamese_sections(const PseudoParModel& model, const ModelHost& host) {
    const FramedMesh& m = host.mesh;
    Siamese s;
    s.d = constant_combing(m, Vec3::UnitX());
    s.g = s.d;
    const int N = m.region_index("N");
    for (int it = 0; it < host.nt; ++it)
        for (int iu = 0; iu < host.nu; ++iu) {
            Vec3 x = model.e1g(host.t_of(it), host.u_of(iu));
            for (int ic = 0; ic < host.nc; ++ic) {
                int v = host.vertex(it, iu, ic);
                s.g.vec[v] = to_home(m, x, v, N);
            }
        }
    return s;
}

std::vector<ExceptionalComponent> exceptional_params(const PseudoParModel& model) {
    const int nt = model.cfg.grid_t, nu = model.cfg.grid_u;
    std::vector<Vec3> h(nt * nu);
    for (int it = 0; it < nt; ++it)
        for (int iu = 0; iu < nu; ++iu)
            h[it * nu + iu] = rot_e1(-M_PI - model.theta(model.u_at(iu))) * (model.F[it * nu + iu] * Vec3::UnitX());
    std::vector<ExceptionalComponent> out;
    for (int it = 0; it + 1 < nt; ++it)
        for (int iu = 0; iu + 1 < nu; ++iu) {
            // Two triangles per cell, corners as (it, iu).
            const std::array<std::array<int, 2>, 3> tri[2] = {{{{it, iu}, {it, iu + 1}, {it + 1, iu + 1}}},
                                                              {{{it, iu}, {it + 1, iu + 1}, {it + 1, iu}}}};
            for (const auto& T : tri) {
                std::array<Eigen::Vector2d, 3> z, p;
                double hx = 0;
                for (int q = 0; q < 3; ++q) {
                    const Vec3& v = h[T[q][0] * nu + T[q][1]];
                    z[q] = {v.y(), v.z()};
                    p[q] = {model.u_at(T[q][1]), model.t_at(T[q][0])};
                    hx += v.x() / 3;
                }
                if (hx >= 0) continue;
                Eigen::Matrix2d A;
                A << z[1] - z[0], z[2] - z[0];
                if (std::abs(A.determinant()) < 1e-300) continue;
                Eigen::Vector2d l = A.colPivHouseholderQr().solve(-z[0]);
                double l0 = 1 - l[0] - l[1];
                if (l[0] < 0 || l[1] < 0 || l0 < 0) continue;
                if (l[0] == 0 || l[1] == 0 || l0 == 0) throw Error("Degenerate", "exceptional point on a grid edge");
                Eigen::Vector2d pos = l0 * p[0] + l[0] * p[1] + l[1] * p[2];
                Eigen::Matrix2d P;
                P << p[1] - p[0], p[2] - p[0];
                // d(hy, hz)/d(u, t): normal plane oriented (u, t) so the parallel runs along +gamma.
                double det = (A * P.inverse()).determinant();
                ExceptionalComponent c{pos[1], pos[0], det > 0 ? 1 : -1};
                // A zero on a shared edge or node is seen by several triangles.
                bool dup = false;
                for (const auto& o : out)
                    if (std::hypot(o.t - c.t, o.u - c.u) < 1e-9) {
                        if (o.orientation != c.orientation) throw Error("Degenerate", "exceptional point with mixed signs");
                        dup = true;
                    }
                if (!dup) out.push_back(c);
            }
        }
    return out;
}

PLLink exceptional_link(const PseudoParModel& model, const ModelHost& host, uint64_t seed) {
    Siamese s = siamese_sections(model, host);
    auto pp = perturb_pair(host.mesh, s.d, s.g, seed);
    return coincidence_link(host.mesh, s.d, pp.Y, -1);
}

namespace {

// Bilinear value of X (inner frame) at (t, u) on lattice column ic.
Vec3 sample_inner(const ModelHost& host, const Combing& X, double t, double u, int ic) {
    const int N = host.mesh.region_index("N");
    auto locate = [](const std::vector<double>& xs, double x, int& i, double& f) {
        x = std::clamp(x, xs.front(), xs.back());
        i = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
        i = std::clamp(i, 0, static_cast<int>(xs.size()) - 2);
        f = (x - xs[i]) / (xs[i + 1] - xs[i]);
    };
    int it, iu;
    double ft, fu;
    locate(host.ts, t, it, ft);
    locate(host.us, u, iu, fu);
    auto at = [&](int a, int b) { return in_region(host.mesh, X.vec, host.vertex(a, b, ic), N); };
    return (1 - ft) * (1 - fu) * at(it, iu) + ft * (1 - fu) * at(it + 1, iu) + (1 - ft) * fu * at(it, iu + 1) +
           ft * fu * at(it + 1, iu + 1);
}

}  // namespace

std::vector<Vec3> correction_curve(const ModelHost& host, const PseudoParModel&, const Combing& X,
                                   const ExceptionalComponent& c) {
    std::vector<Vec3> curve;
    for (int ic = 0; ic < host.nc; ++ic) {
        Vec3 x = sample_inner(host, X, c.t, c.u, ic);
        if (x.norm() < 1e-9) throw Error("Degenerate", "combing sample vanishes on the exceptional link");
        curve.push_back(x.normalized());
    }
    if (c.orientation < 0) std::reverse(curve.begin(), curve.end());
    return curve;
}

Combing model_combing(const PseudoParModel& model, const ModelHost& host, double delta, double angle) {
    const FramedMesh& m = host.mesh;
    const Vec3 w0(0, std::cos(angle), std::sin(angle));
    // Constant outside N; every vertex of N is on the lattice and is set below.
    Combing X;
    X.vec.assign(m.num_vertices, (Vec3::UnitX() + delta * w0).normalized());
    const int N = m.region_index("N");
    for (int it = 0; it < host.nt; ++it)
        for (int iu = 0; iu < host.nu; ++iu) {
            double s = (host.t_of(it) - model.cfg.a) / (model.cfg.b - model.cfg.a), phi = std::pow(s, 1.3);
            Vec3 W = (1 - phi) * w0 + phi * (model.T(host.u_of(iu)).transpose() * w0);
            Vec3 x = (Vec3::UnitX() + delta * W).normalized();
            for (int ic = 0; ic < host.nc; ++ic) {
                int v = host.vertex(it, iu, ic);
                X.vec[v] = to_home(m, x, v, N);
            }
        }
    X.sigma = default_sigma(m, X.vec);
    return X;
}

Combing bump_homotopy(const PseudoParModel& model, const ModelHost& host, const Combing& X, uint64_t seed, double peak) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 11);
    std::uniform_real_distribution<double> U(0, 1);
    std::normal_distribution<double> G(0, 1);
    Combing Y = X;
    const int N = host.mesh.region_index("N");
    // Two bumps with different centers and axes, so that X along a parallel
    // sweeps an area instead of retracing an arc.
    for (int k = 0; k < 2; ++k) {
        // Axes near e1^perp move X across +-e1 for large peaks.
        Vec3 axis(0.2 * G(rng), G(rng), G(rng));
        axis.normalize();
        const double cs = 0.35 + 0.3 * U(rng), cu = 0.35 + 0.3 * U(rng), cc = U(rng), r = 0.3, rc = 0.4;
        const double pk = peak * (0.5 + 0.5 * U(rng));
        for (int it = 0; it < host.nt; ++it)
            for (int iu = 0; iu < host.nu; ++iu)
                for (int ic = 0; ic < host.nc; ++ic) {
                    double s = (host.t_of(it) - model.cfg.a) / (model.cfg.b - model.cfg.a), q = (host.u_of(iu) + 1) / 2;
                    double dc = std::abs(double(ic) / host.nc - cc);
                    dc = std::min(dc, 1 - dc);
                    double d = std::sqrt(std::pow((s - cs) / r, 2) + std::pow((q - cu) / r, 2) + std::pow(dc / rc, 2));
                    if (d >= 1) continue;
                    double beta = pk * std::pow(std::cos(M_PI * d / 2), 2);
                    int v = host.vertex(it, iu, ic);
                    Vec3 x = in_region(host.mesh, Y.vec, v, N);
                    Y.vec[v] = to_home(host.mesh, axis_rotation(axis, beta) * x, v, N);
                }
    }
    return Y;
}

Q pseudopar_bracket(const PseudoParModel& model, const ModelHost& host, const Combing& X, uint64_t seed, BracketInfo* info) {
    const FramedMesh& m = host.mesh;
    Siamese s = siamese_sections(model, host);
    std::optional<Q> lk;
    int retries = 0;
    for (int attempt = 0; attempt < 6 && !lk; ++attempt) {
        uint64_t sd = seed + 7919ULL * attempt;
        Combing Xp = X;
        if (attempt > 0) {
            // A small seeded rotation on interior vertices moves off non-generic positions.
            std::mt19937_64 rng(sd);
            std::normal_distribution<double> G(0, 1);
            Mat3 R = axis_rotation(Vec3(G(rng), G(rng), G(rng)).normalized(), 1e-3 * attempt);
            for (int v = 0; v < m.num_vertices; ++v)
                if (!m.topo().boundary_vertex[v]) Xp.vec[v] = R * Xp.vec[v];
        }
        try {
            Xp = perturb_pair(m, s.d, Xp, sd).Y;
            Xp = perturb_pair(m, s.g, Xp, sd + 1).Y;
            auto Ld = coincidence_links(m, s.d, Xp);
            auto Lg = coincidence_links(m, s.g, Xp);
            PLLink Lp = link_union(scaled(Ld.plus, Q(1, 2)), scaled(Lg.plus, Q(1, 2)));
            PLLink Lm = link_union(scaled(Ld.minus, Q(1, 2)), scaled(Lg.minus, Q(1, 2)));
            lk = linking_number(m, Lp, Lm);
        } catch (const Error& e) {
            if (e.kind() != "Degenerate" && e.kind() != "LinksIntersect" && e.kind() != "PerturbationFailed") throw;
            ++retries;
        }
    }
    if (!lk) throw Error("Degenerate", "no generic perturbation found");
    int corr = 0;
    auto comps = exceptional_params(model);
    for (const auto& c : comps) corr += s2_linking(correction_curve(host, model, X, c));
    if (info) *info = {*lk, corr, static_cast<int>(comps.size()), retries};
    return 4 * *lk - corr;
}

}  // namespace cf
