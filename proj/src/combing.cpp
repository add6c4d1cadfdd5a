#include "cf/combing.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cf/coincidence.hpp"
#include "cf/errors.hpp"

namespace cf {

Vec3 in_region(const FramedMesh& m, const std::vector<Vec3>& field, int v, int region) {
    int home = m.topo().home_region[v];
    return m.transition(v, home, region) * field[v];
}

Vec3 to_home(const FramedMesh& m, const Vec3& x, int v, int region) {
    int home = m.topo().home_region[v];
    return m.transition(v, region, home) * x;
}

Mat3 axis_rotation(const Vec3& axis, double angle) {
    return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

Diagnostics validate_combing(const FramedMesh& m, const Combing& X) {
    Diagnostics d;
    const auto& t = m.topo();
    if (static_cast<int>(X.vec.size()) != m.num_vertices) {
        d.violations.push_back("vector count does not match vertex count");
        return d;
    }
    for (int v = 0; v < m.num_vertices; ++v) {
        if (std::abs(X.vec[v].norm() - 1.0) > 1e-12) d.violations.push_back("non-unit vector at vertex " + std::to_string(v));
        if (!t.boundary_vertex[v]) continue;
        auto it = X.sigma.find(v);
        if (it == X.sigma.end()) {
            d.violations.push_back("missing sigma at boundary vertex " + std::to_string(v));
            continue;
        }
        if (std::abs(it->second.norm() - 1.0) > 1e-12) d.violations.push_back("sigma not unit at vertex " + std::to_string(v));
        if (std::abs(it->second.dot(X.vec[v])) > 1e-12) d.violations.push_back("sigma not orthogonal to X at vertex " + std::to_string(v));
    }
    return d;
}

std::map<int, Vec3> default_sigma(const FramedMesh& m, const std::vector<Vec3>& X) {
    std::map<int, Vec3> s;
    const auto& t = m.topo();
    for (int v = 0; v < m.num_vertices; ++v) {
        if (!t.boundary_vertex[v]) continue;
        Vec3 e2(0, 1, 0);
        Vec3 p = e2 - e2.dot(X[v]) * X[v];
        if (p.norm() < 1e-6) throw Error("SigmaVanishes", "second frame vector is parallel to X at vertex " + std::to_string(v));
        s[v] = p.normalized();
    }
    return s;
}

Combing constant_combing(const FramedMesh& m, const Vec3& v0, std::vector<std::string>* warnings) {
    double n = v0.norm();
    if (!(n > 0) || !std::isfinite(n)) throw Error("InvalidArgument", "zero vector");
    Vec3 v = v0 / n;
    if (std::abs(n - 1.0) > 1e-12 && warnings) warnings->push_back("input vector normalized");
    for (const auto& tr : m.transitions)
        if ((tr.rot * v - v).norm() > 1e-12)
            throw Error("NonInvariantUnderTransitions", "vector moves under the transition at vertex " + std::to_string(tr.vertex));
    Combing X;
    X.vec.assign(m.num_vertices, v);
    Vec3 e = std::abs(v.y()) < 0.9 ? Vec3(0, 1, 0) : Vec3(0, 0, 1);
    Vec3 s = (e - e.dot(v) * v).normalized();
    for (int u = 0; u < m.num_vertices; ++u)
        if (m.topo().boundary_vertex[u]) X.sigma[u] = s;
    return X;
}

Vec3 default_g(double rho, double angle) {
    double r = std::clamp(rho, 0.0, 1.0);
    if (r >= 1.0) return Vec3(1, 0, 0);
    double s = std::sin(M_PI * r);
    return Vec3(-std::cos(M_PI * r), s * std::sin(angle), s * std::cos(angle));
}

Combing example_tube_combing(const FramedMesh& m, const TubeChart& tube, const Combing& base, const DiskMap& g) {
    Combing X = base;
    int r = m.region_index(tube.region);
    for (size_t k = 0; k < tube.vertices.size(); ++k) {
        Vec3 val = g(tube.rho[k], tube.angle[k]);
        if (std::abs(val.norm() - 1.0) > 1e-12) throw Error("InvalidArgument", "g sample is not a unit vector");
        if (tube.rho[k] >= 1.0 - 1e-12 && (val - Vec3(1, 0, 0)).norm() > 1e-12)
            throw Error("BoundaryNotE1", "g is not e1 on the boundary circle");
        int v = tube.vertices[k];
        X.vec[v] = to_home(m, val, v, r);
    }
    return X;
}

TubeChart tube_chart(const SolidTorus& st) {
    TubeChart c;
    c.region = st.mesh.regions.begin()->first;
    const double h = st.w / 2.0;
    for (int v = 0; v < st.mesh.num_vertices; ++v) {
        auto [i, j, k] = st.ijk[v];
        c.vertices.push_back(v);
        c.rho.push_back(std::max(std::abs(i - h), std::abs(j - h)) / h);
        c.angle.push_back(std::atan2(j - h, i - h));
    }
    if (st.w % 2 == 0) c.core = st.longitude_loop(st.w / 2, st.w / 2);
    return c;
}

namespace {
bool is_generic(const FramedMesh& m, const Combing& X, const Combing& Y) {
    try {
        coincidence_links(m, X, Y);
        return true;
    } catch (const Error& e) {
        if (e.kind() == "Degenerate") return false;
        throw;
    }
}

Vec3 random_axis(std::mt19937_64& rng) {
    std::normal_distribution<double> N(0, 1);
    Vec3 a;
    do a = Vec3(N(rng), N(rng), N(rng));
    while (a.norm() < 1e-3);
    return a.normalized();
}
}  // namespace

PerturbResult perturb_pair(const FramedMesh& m, const Combing& X, const Combing& Y, uint64_t seed, double delta) {
    PerturbResult out;
    if (is_generic(m, X, Y)) {
        out.Y = Y;
        return out;
    }
    const auto& t = m.topo();
    const double schedule[8] = {1, 0.5, 2, 0.25, 4, 0.125, 8, 0.0625};
    for (int attempt = 0; attempt < 8; ++attempt) {
        double d = delta * schedule[attempt];
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<uint64_t>(attempt) + 1);
        std::uniform_real_distribution<double> U(0, 1);
        Mat3 R = axis_rotation(random_axis(rng), d);
        Combing Z = Y;
        for (int v = 0; v < m.num_vertices; ++v) {
            Vec3 ax = random_axis(rng);
            double ang = d * 1e-3 * U(rng);
            if (t.boundary_vertex[v]) continue;
            Z.vec[v] = (R * axis_rotation(ax, ang) * Y.vec[v]).normalized();
        }
        out.retries = attempt + 1;
        out.delta = d;
        if (is_generic(m, X, Z)) {
            out.Y = std::move(Z);
            return out;
        }
    }
    throw Error("PerturbationFailed", "no generic perturbation after 8 retries");
}

}  // namespace cf
