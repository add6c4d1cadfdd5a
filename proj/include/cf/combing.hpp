// Vertex-sampled combings with boundary sections.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cf/generators.hpp"
#include "cf/mesh.hpp"

namespace cf {

struct Combing {
    std::vector<Vec3> vec;       // per vertex, in the frame of the vertex's home region
    std::map<int, Vec3> sigma;   // boundary vertex -> section of X^perp, home frame
};

// Vector of vertex v expressed in region `region`.
Vec3 in_region(const FramedMesh& m, const std::vector<Vec3>& field, int v, int region);
// Convert a vector given in `region` coordinates to v's home frame.
Vec3 to_home(const FramedMesh& m, const Vec3& x, int v, int region);

Diagnostics validate_combing(const FramedMesh& m, const Combing& X);

// Constant field; v is normalized (a warning is appended when |v| != 1).
Combing constant_combing(const FramedMesh& m, const Vec3& v, std::vector<std::string>* warnings = nullptr);

// sigma = projection of the frame's second vector onto X^perp on the boundary.
std::map<int, Vec3> default_sigma(const FramedMesh& m, const std::vector<Vec3>& X);

// g(rho, angle): -e1 at the center, e1 on the boundary circle, covering -e1 once positively.
Vec3 default_g(double rho, double angle);
using DiskMap = std::function<Vec3(double rho, double angle)>;

// Replaces X on a tube by g in the tube's frame; other vertices keep `base`.
Combing example_tube_combing(const FramedMesh& m, const TubeChart& tube, const Combing& base, const DiskMap& g = default_g);
// Tube chart of a standalone solid torus (max-norm disk radius).
TubeChart tube_chart(const SolidTorus& st);

struct PerturbResult {
    Combing Y;
    double delta = 0;
    int retries = 0;
};
// Returns Y unchanged when the pair is already generic; otherwise rotates Y at
// interior vertices by a seeded rotation of angle <= delta (with a much smaller
// per-vertex jitter) and retries with delta/2, 2 delta, delta/4, ... up to 8 times.
PerturbResult perturb_pair(const FramedMesh& m, const Combing& X, const Combing& Y, uint64_t seed, double delta = 1e-3);

// Rotation by angle about axis.
Mat3 axis_rotation(const Vec3& axis, double angle);

}  // namespace cf
