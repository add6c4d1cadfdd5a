// Rational Lagrangian-preserving surgery on combed meshes.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cf/combing.hpp"
#include "cf/homology.hpp"
#include "cf/mesh.hpp"

namespace cf {

// Replace region A of the host by B. h maps host vertices on the boundary of A
// to boundary vertices of B. At those vertices the frame of B's home region is
// identified with the frame of A.
struct LPSurgeryDatum {
    std::string region;
    FramedMesh B;
    BoundaryIdentification h;
    std::optional<Combing> XB;      // per B vertex, B home frames
    std::map<int, Vec3> sigma_A;    // host vertex -> section on the boundary of A, frame of A
};

struct LPReport {
    bool ok = false;
    int genus_A = -1, genus_B = -1;
    std::vector<std::string> problems;
    std::vector<Chain> offending;  // Lagrangian cycles of A (host edges) not killed in B
};
// Never throws on a bad datum; the report says what is wrong.
LPReport validate_lp(const FramedMesh& M, const LPSurgeryDatum& d, const Combing* X = nullptr);

// B = a copy of region A with h the identity; X_B is Xnew restricted to A.
LPSurgeryDatum copy_datum(const FramedMesh& M, const std::string& region, const std::optional<Combing>& Xnew = std::nullopt);

struct Surgered {
    FramedMesh mesh;
    std::optional<Combing> X;
    std::vector<int> vertex_of_host;  // host vertex -> new vertex, -1 inside replaced regions
    std::vector<int> host_of_vertex;  // new vertex -> host vertex, -1 for new interior vertices
};
// M({B_i/A_i}, i in I). X may be null (mesh only). Throws RegionsOverlap, BoundaryMismatch.
Surgered perform(const FramedMesh& M, const Combing* X, const std::vector<LPSurgeryDatum>& data, const std::vector<int>& I);

// When every B_i in I is a copy of A_i (same tets, h the identity) the surgered
// combing lives on M itself.
bool is_copy(const FramedMesh& M, const LPSurgeryDatum& d);
Combing surgered_combing_in_place(const FramedMesh& M, const Combing& X, const std::vector<LPSurgeryDatum>& data,
                                  const std::vector<int>& I);

// Euler zero-set class of X vanishes in H1(M; Q).
bool torsion_check(const FramedMesh& M, const Combing& X, uint64_t seed = 1);

struct SurgeryClass {
    Chain cycle;            // host edge cycle supported in A
    std::vector<Q> coords;  // in the H1 basis of A
};
SurgeryClass surgery_class(const FramedMesh& M, const Combing& X, const LPSurgeryDatum& d, uint64_t seed = 1);

// Moves `tets` into a new region that uses the frame of their current region.
FramedMesh carve_region(const FramedMesh& M, const std::string& name, const std::vector<int>& tets);

}  // namespace cf
