// Oriented PL zero sets of sections of X^perp: coincidence links and Euler chains.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "cf/combing.hpp"
#include "cf/rational.hpp"

namespace cf {

// One piece of a link inside a tet: from a point on local face in_face to a
// point on local face out_face, both in the tet's barycentric coordinates.
struct Segment {
    int tet = -1;
    int in_face = -1, out_face = -1;
    std::array<Q, 4> in, out;
};

struct Loop {
    std::vector<Segment> segs;
    Q mult = 1;
};

struct PLLink {
    std::vector<Loop> loops;
    bool empty() const { return loops.empty(); }
    size_t num_segments() const;
};

PLLink reversed(const PLLink& L);
PLLink scaled(const PLLink& L, const Q& q);
PLLink link_union(const PLLink& a, const PLLink& b);

// Infinitesimal used for the section Y - <Y,X>X at boundary vertices, where it
// is replaced by eta * sigma.
constexpr double kBoundaryEta = 1.0 / 1099511627776.0;  // 2^-40

struct CoincidenceLinks {
    PLLink plus;   // X = Y
    PLLink minus;  // X = -Y
};
// Both links from the zeros of the projection of Y onto X^perp; throws Degenerate.
CoincidenceLinks coincidence_links(const FramedMesh& m, const Combing& X, const Combing& Y);
PLLink coincidence_link(const FramedMesh& m, const Combing& X, const Combing& Y, int sign);

// Zero set of a generic section of X^perp that equals sigma on the boundary.
PLLink euler_zero_chain(const FramedMesh& m, const Combing& X, uint64_t seed = 1);

// Zero link of the section s (per vertex, home frame) of X^perp. When cls is
// given, zeros are split by the sign of the interpolated cls value (|cls| >= 0.5 required).
std::vector<PLLink> zero_links(const FramedMesh& m, const std::vector<Vec3>& X, const std::vector<Vec3>& s,
                               const std::vector<double>* cls);

}  // namespace cf
