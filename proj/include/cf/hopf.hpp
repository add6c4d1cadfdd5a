// The two-tube Hopf example on S^3, end to end.
#pragma once

#include <cstdint>
#include <optional>

#include "cf/generators.hpp"
#include "cf/invariants.hpp"

namespace cf {

struct HopfExample {
    HopfMesh hm;
    Combing X;                 // constant e1 in the global frame
    LPSurgeryDatum d1, d2;     // tubes around core1 and core2, B_i = A_i
    std::optional<LPSurgeryDatum> d3;  // third tube, when configured
};

// g3 defaults to the trivial (constant e1) replacement.
HopfExample hopf_example(const HopfConfig& cfg = {}, const DiskMap& g1 = default_g, const DiskMap& g2 = default_g,
                         const std::optional<DiskMap>& g3 = std::nullopt);

struct HopfDemo {
    Q variation;       // -2 lk of the surgery classes
    Q closed_sum;      // alternating sum of p1 over the four combings
    Q p1_X_X1, p1_X2_X12;
    std::vector<Q> class1, class2;  // surgery classes in H1 of each tube
    int tets = 0;
    uint64_t seed = 0;
};
HopfDemo hopf_demo(const HopfConfig& cfg = {}, uint64_t seed = 1);

}  // namespace cf
