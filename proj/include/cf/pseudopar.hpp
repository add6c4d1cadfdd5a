// Pseudo-parallelizations: the twisted frame on [a,b] x gamma x [-1,1], its two
// Siamese sections, and the Pontrjagin bracket of a combing against it.
#pragma once
#include <Eigen/Geometry>
#include <cstdint>
#include <vector>

#include "cf/coincidence.hpp"
#include "cf/combing.hpp"
#include "cf/generators.hpp"
#include "cf/homology.hpp"

namespace cf {

struct PseudoParConfig {
    double a = 0, b = 1, eps = 0.2;
    int grid_t = 41, grid_u = 41;
    bool corrupt = false;  // right collar set to Id: the boundary loop no longer lifts
    double tol = 1e-10;
    int max_sweeps = 200000;
};

struct PseudoParModel {
    PseudoParConfig cfg;
    std::vector<Eigen::Quaterniond> F;  // grid_t x grid_u, index it * grid_u + iu
    int sweeps = 0;
    double residual = 0;

    double t_at(int it) const;
    double u_at(int iu) const;
    // Clamped smoothstep, odd, theta(-1) = -pi, theta(1) = pi.
    double theta(double u) const;
    // T(u) = R_{e1, pi + theta(u)}.
    Mat3 T(double u) const;
    Eigen::Quaterniond F_at(double t, double u) const;
    // E1^g = R_{e1, -pi - theta(u)} F(t,u) e1 in the inner frame.
    Vec3 e1g(double t, double u) const;
};

// Holonomy (+1 or -1) of the SU(2) lift of F along the boundary of the collar.
int lift_holonomy(const PseudoParConfig& cfg);
// Relaxes F inside the collar; throws LiftObstruction when the holonomy is -1.
PseudoParModel build_model(const PseudoParConfig& cfg = {});

// Degree of E2^e in the d (or g) chart along the meridian, oriented so that it
// links gamma once positively. which is 'd' or 'g'.
int meridian_degree(const PseudoParModel& model, char which, int samples = 400);

// A mesh with a region "N" = [a,b] x gamma x [-1,1] around a circle gamma.
// Outside N the frame is the exterior one; on the side t = b the inner frame is
// the exterior frame composed with T(u).
struct ModelHost {
    FramedMesh mesh;
    int nt = 0, nu = 0, nc = 0;
    std::vector<int> lattice;  // (it, iu, ic) -> vertex, index (it * nu + iu) * nc + ic
    std::vector<double> ts, us;  // lattice coordinates, denser near the middle
    Chain gamma;                 // core parallel, oriented along c
    int vertex(int it, int iu, int ic) const { return lattice[(it * nu + iu) * nc + ic]; }
    double t_of(int it) const { return ts[it]; }
    double u_of(int iu) const { return us[iu]; }
};
// Lattice spacing shrinks by 1 - warp in the middle of N.
constexpr double kHostWarp = 0.8;
// Solid torus [0,w]^2 x Z_m with N = [p, w-p]^2 x Z_m; t along j, u along i.
ModelHost solid_torus_host(const PseudoParModel& model, int w = 16, int m = 4, int p = 2);
// S^3 with N a ring of cubes parallel to the phi1 core; t along l, u along j.
ModelHost s3_host(const PseudoParModel& model, int width = 16, int n = 24);

struct Siamese {
    Combing d, g;  // E1^d and E1^g
};
Siamese siamese_sections(const PseudoParModel& model, const ModelHost& host);

struct ExceptionalComponent {
    double t = 0, u = 0;
    int orientation = 0;  // +1 along gamma
};
// Components {t*} x gamma x {u*} of L_{E1^d = -E1^g}, from the model grid.
std::vector<ExceptionalComponent> exceptional_params(const PseudoParModel& model);
// The same link computed on the host by coincidence extraction.
PLLink exceptional_link(const PseudoParModel& model, const ModelHost& host, uint64_t seed = 1);

// X along one exceptional parallel in the inner frame, normalized and traversed
// along the component's orientation.
std::vector<Vec3> correction_curve(const ModelHost& host, const PseudoParModel& model, const Combing& X,
                                   const ExceptionalComponent& c);

// A combing on the host: normalize(e1 + delta w) outside N, filled inside N.
Combing model_combing(const PseudoParModel& model, const ModelHost& host, double delta = 0.6, double angle = 0.4);
// X rotated inside N by two bumps (localized along gamma too) of peak angle
// at most `peak` about seeded axes.
Combing bump_homotopy(const PseudoParModel& model, const ModelHost& host, const Combing& X, uint64_t seed, double peak);

struct BracketInfo {
    Q lk;
    int correction = 0;
    int components = 0;
    int retries = 0;
};
// 4 lk(L_{tau=X}, L_{tau=-X}) - lk_{S^2}(e1 - (-e1), X(L_{E1^d = -E1^g})).
Q pseudopar_bracket(const PseudoParModel& model, const ModelHost& host, const Combing& X, uint64_t seed = 1,
                    BracketInfo* info = nullptr);

}  // namespace cf
