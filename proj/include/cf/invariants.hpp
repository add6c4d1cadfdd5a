// Differences of Pontrjagin numbers of torsion combings and their surgery variations.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cf/combing.hpp"
#include "cf/surgery.hpp"

namespace cf {

struct P1Info {
    uint64_t seed = 0;   // seed of the perturbation actually used
    double delta = 0;
    int retries = 0;
    size_t plus_segments = 0, minus_segments = 0;
};

// 4 lk(L_{X=Y}, L_{X=-Y}). Throws NotTorsion; Degenerate after exhausting re-perturbations.
Q p1_diff(const FramedMesh& m, const Combing& X, const Combing& Y, uint64_t seed = 1, P1Info* info = nullptr);

// -2 lk_M(class(d1), class(d2)). Throws ClassNotNullHomologous, NotTorsion.
Q second_order_variation(const FramedMesh& M, const Combing& X, const LPSurgeryDatum& d1, const LPSurgeryDatum& d2,
                         uint64_t seed = 1);

// p1[X] - p1[X^1] - p1[X^2] + p1[X^12] from p1_diff; needs B_i to be copies of A_i.
Q closed_alternating_sum(const FramedMesh& M, const Combing& X, const LPSurgeryDatum& d1, const LPSurgeryDatum& d2,
                         uint64_t seed = 1);

struct FiniteTypeReport {
    Q value;                       // variation(d1,d2) on M minus the same after d3
    Q variation_before, variation_after;
    std::optional<Q> closed_value;  // the same difference from closed sums, when available
};
FiniteTypeReport finite_type_check(const FramedMesh& M, const Combing& X, const LPSurgeryDatum& d1,
                                   const LPSurgeryDatum& d2, const LPSurgeryDatum& d3, uint64_t seed = 1);

// Datum re-expressed in a surgered mesh (regions keep their names).
LPSurgeryDatum remap_datum(const LPSurgeryDatum& d, const Surgered& s);

// p1_diff(X, Y) == 0. Only meaningful for combings in the same spin^c class,
// which is not checked.
bool homotopy_predicate(const FramedMesh& m, const Combing& X, const Combing& Y, uint64_t seed = 1);

}  // namespace cf
