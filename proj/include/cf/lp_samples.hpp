// Sample surgery data: subdivided copies, RP^3 summands, and a complement swap.
#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cf/surgery.hpp"

namespace cf {

// Each listed tet is coned from a new interior vertex (1 -> 4). Other tets keep
// their ids; the new tets are appended.
FramedMesh stellar_subdivide(const FramedMesh& m, const std::vector<int>& tets);

// RP^3 as the antipodal quotient of the boundary of the 4-dimensional
// cross-polytope: 8 tets on 4 vertices.
FramedMesh rp3();

struct PuncturedRP3 {
    FramedMesh mesh;            // refined once, one tet removed
    std::array<int, 4> hole{};  // vertices of the removed tet, in its order
    int hole_orientation = 1;
};
PuncturedRP3 punctured_rp3();

// Copy of the region with `count` seeded tets stellar-subdivided.
LPSurgeryDatum stellar_datum(const FramedMesh& M, const std::string& region, uint64_t seed, int count = 4);
// The region with a punctured RP^3 glued into a seeded tet that avoids the
// region's boundary. A one-tet region is replaced by the punctured RP^3 itself.
LPSurgeryDatum rp3_datum(const FramedMesh& M, const std::string& region, uint64_t seed = 1);
// The closure of the complement of the region, mirrored, glued back by the
// identity. For a tube in S^3 this trades meridian and longitude.
LPSurgeryDatum complement_datum(const FramedMesh& M, const std::string& region);

}  // namespace cf
