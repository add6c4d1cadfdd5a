// Exact rational linking numbers of PL links in triangulated 3-manifolds.
#pragma once

#include <cstdint>
#include <vector>

#include "cf/coincidence.hpp"
#include "cf/homology.hpp"

namespace cf {

// Snaps every face crossing to the face corner with the largest barycentric
// weight (lowest vertex id on ties); the result is an edge cycle.
Chain snap_to_cycle(const FramedMesh& m, const PLLink& L);

// Sigma with boundary = cycle; throws NotNullHomologous.
Chain bounding_chain(const FramedMesh& m, const Chain& cycle);

// <Sigma_1, L2> for a rational chain bounding L1. Throws LinksIntersect,
// NotNullHomologous, or Degenerate for non-transverse input.
Q linking_number(const FramedMesh& m, const PLLink& L1, const PLLink& L2);

// PL curve near a simplicial 1-cycle: each edge runs inside a tet containing it,
// consecutive edges are joined through the star of their common vertex. Face
// crossing points are seeded generic rationals.
PLLink pushoff(const FramedMesh& m, const Chain& cycle, uint64_t seed = 7);

// Signed crossings of a closed spherical polyline with the half great circle
// from -e1 to e1 through e3 (or -e3): +1 when the curve crosses with y increasing.
// Through -e3 the sign is flipped, so both arcs give the same count for a curve
// avoiding +-e1. Throws CurveHitsPole.
int s2_linking(const std::vector<Vec3>& curve, bool through_minus_e3 = false);

}  // namespace cf
