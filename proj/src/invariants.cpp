#include "cf/invariants.hpp"

#include "cf/coincidence.hpp"
#include "cf/errors.hpp"
#include "cf/linking.hpp"

namespace cf {

namespace {

bool torsion(const FramedMesh& m, const Combing& X, uint64_t seed) {
    if (homology_of(m)->rank1() == 0) return true;
    return torsion_check(m, X, seed);
}

}  // namespace

Q p1_diff(const FramedMesh& m, const Combing& X, const Combing& Y, uint64_t seed, P1Info* info) {
    if (!torsion(m, X, seed)) throw Error("NotTorsion", "first combing is not torsion");
    if (!torsion(m, Y, seed)) throw Error("NotTorsion", "second combing is not torsion");
    for (int attempt = 0;; ++attempt) {
        uint64_t s = seed + 7919 * static_cast<uint64_t>(attempt);
        try {
            auto pr = perturb_pair(m, X, Y, s);
            auto L = coincidence_links(m, X, pr.Y);
            if (info) *info = {s, pr.delta, pr.retries, L.plus.num_segments(), L.minus.num_segments()};
            if (L.plus.empty() || L.minus.empty()) return 0;
            return 4 * linking_number(m, L.plus, L.minus);
        } catch (const Error& e) {
            // links must stay functions of the combings: re-perturb, never nudge
            if ((e.kind() != "LinksIntersect" && e.kind() != "Degenerate") || attempt == 3) throw;
        }
    }
}

Q second_order_variation(const FramedMesh& M, const Combing& X, const LPSurgeryDatum& d1, const LPSurgeryDatum& d2,
                         uint64_t seed) {
    // All four combings must be torsion.
    std::vector<LPSurgeryDatum> data{d1, d2};
    if (homology_of(M)->rank1() > 0) {
        for (auto I : std::vector<std::vector<int>>{{}, {0}, {1}, {0, 1}}) {
            auto s = perform(M, &X, data, I);
            if (!torsion(s.mesh, *s.X, seed)) throw Error("NotTorsion", "a surgered combing is not torsion");
        }
    }
    auto c1 = surgery_class(M, X, d1, seed), c2 = surgery_class(M, X, d2, seed);
    auto h = homology_of(M);
    if (!h->is_boundary(c1.cycle) || !h->is_boundary(c2.cycle))
        throw Error("ClassNotNullHomologous", "surgery class does not vanish in H1(M)");
    if (c1.cycle.empty() || c2.cycle.empty()) return 0;
    for (int attempt = 0;; ++attempt) {
        try {
            auto L1 = pushoff(M, c1.cycle, seed + 101 * attempt);
            auto L2 = pushoff(M, c2.cycle, seed + 101 * attempt + 53);
            if (L1.empty() || L2.empty()) return 0;
            return -2 * linking_number(M, L1, L2);
        } catch (const Error& e) {
            if ((e.kind() != "LinksIntersect" && e.kind() != "Degenerate") || attempt == 3) throw;
        }
    }
}

Q closed_alternating_sum(const FramedMesh& M, const Combing& X, const LPSurgeryDatum& d1, const LPSurgeryDatum& d2,
                         uint64_t seed) {
    if (!is_copy(M, d1) || !is_copy(M, d2))
        throw Error("Unsupported", "closed sums need replacements that are copies of their regions");
    std::vector<LPSurgeryDatum> data{d1, d2};
    Combing X1 = surgered_combing_in_place(M, X, data, {0});
    Combing X2 = surgered_combing_in_place(M, X, data, {1});
    Combing X12 = surgered_combing_in_place(M, X, data, {0, 1});
    // p1[X] - p1[X^1] - p1[X^2] + p1[X^12]
    return -p1_diff(M, X, X1, seed) + p1_diff(M, X2, X12, seed);
}

LPSurgeryDatum remap_datum(const LPSurgeryDatum& d, const Surgered& s) {
    LPSurgeryDatum out = d;
    out.h.vmap.clear();
    for (auto [hv, bv] : d.h.vmap) {
        int v = s.vertex_of_host.at(hv);
        if (v < 0) throw Error("RegionsOverlap", "datum touches a replaced region");
        out.h.vmap[v] = bv;
    }
    out.sigma_A.clear();
    for (auto [hv, x] : d.sigma_A) out.sigma_A[s.vertex_of_host.at(hv)] = x;
    return out;
}

FiniteTypeReport finite_type_check(const FramedMesh& M, const Combing& X, const LPSurgeryDatum& d1,
                                   const LPSurgeryDatum& d2, const LPSurgeryDatum& d3, uint64_t seed) {
    FiniteTypeReport r;
    r.variation_before = second_order_variation(M, X, d1, d2, seed);
    std::vector<LPSurgeryDatum> data{d1, d2, d3};
    auto s3 = perform(M, &X, data, {2});
    r.variation_after = second_order_variation(s3.mesh, *s3.X, remap_datum(d1, s3), remap_datum(d2, s3), seed);
    r.value = r.variation_before - r.variation_after;
    if (is_copy(M, d1) && is_copy(M, d2) && is_copy(M, d3)) {
        Combing X3 = surgered_combing_in_place(M, X, data, {2});
        r.closed_value = closed_alternating_sum(M, X, d1, d2, seed) - closed_alternating_sum(M, X3, d1, d2, seed);
    }
    return r;
}

bool homotopy_predicate(const FramedMesh& m, const Combing& X, const Combing& Y, uint64_t seed) {
    return sgn(p1_diff(m, X, Y, seed)) == 0;
}

}  // namespace cf
