#include "cf/hopf.hpp"

#include "cf/errors.hpp"

namespace cf {

namespace {

LPSurgeryDatum tube_datum(const HopfMesh& hm, const Combing& X, const std::string& region, const DiskMap& g) {
    for (const auto& tube : hm.tubes)
        if (tube.region == region) return copy_datum(hm.mesh, region, example_tube_combing(hm.mesh, tube, X, g));
    throw Error("UnknownRegion", region);
}

}  // namespace

HopfExample hopf_example(const HopfConfig& cfg, const DiskMap& g1, const DiskMap& g2, const std::optional<DiskMap>& g3) {
    HopfExample ex;
    ex.hm = hopf_s3(cfg);
    ex.X = constant_combing(ex.hm.mesh, Vec3(1, 0, 0));
    ex.d1 = tube_datum(ex.hm, ex.X, "A1", g1);
    ex.d2 = tube_datum(ex.hm, ex.X, "A2", g2);
    if (cfg.third_tube) {
        if (g3)
            ex.d3 = tube_datum(ex.hm, ex.X, "A3", *g3);
        else
            ex.d3 = copy_datum(ex.hm.mesh, "A3", ex.X);
    }
    return ex;
}

HopfDemo hopf_demo(const HopfConfig& cfg, uint64_t seed) {
    auto ex = hopf_example(cfg);
    const auto& M = ex.hm.mesh;
    HopfDemo r;
    r.tets = M.num_tets();
    r.seed = seed;
    r.class1 = surgery_class(M, ex.X, ex.d1, seed).coords;
    r.class2 = surgery_class(M, ex.X, ex.d2, seed).coords;
    r.variation = second_order_variation(M, ex.X, ex.d1, ex.d2, seed);
    std::vector<LPSurgeryDatum> data{ex.d1, ex.d2};
    Combing X1 = surgered_combing_in_place(M, ex.X, data, {0});
    Combing X2 = surgered_combing_in_place(M, ex.X, data, {1});
    Combing X12 = surgered_combing_in_place(M, ex.X, data, {0, 1});
    r.p1_X_X1 = p1_diff(M, ex.X, X1, seed);
    r.p1_X2_X12 = p1_diff(M, X2, X12, seed);
    r.closed_sum = -r.p1_X_X1 + r.p1_X2_X12;
    return r;
}

}  // namespace cf
