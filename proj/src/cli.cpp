#include "cf/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cf/errors.hpp"
#include "cf/hopf.hpp"
#include "cf/invariants.hpp"
#include "cf/io.hpp"
#include "cf/linking.hpp"
#include "cf/pseudopar.hpp"
#include "cf/surgery.hpp"

namespace cf {

namespace {

struct Opts {
    std::string mesh, sigma, json_out, out, l1, l2, config, subset;
    std::vector<std::string> combings, surgeries;
    uint64_t seed = 1;
    bool check = false, timings = false;
    int sign = 1, homotopy = 0;
    double peak = 2.5;
};

json coords_json(const std::vector<Q>& c) {
    json a = json::array();
    for (const auto& q : c) a.push_back(rational_json(q));
    return a;
}

class Runner {
public:
    Runner(const Opts& o, json& report) : o_(o), report_(report) {}

    void need(const std::string& v, const std::string& flag) {
        if (v.empty()) throw CLI::RequiredError(flag);
    }
    const FramedMesh& mesh() {
        if (!mesh_) {
            need(o_.mesh, "--mesh");
            mesh_ = read_mesh(o_.mesh);
            report_["inputs"]["mesh"] = o_.mesh;
        }
        return *mesh_;
    }
    Combing combing(size_t k) {
        if (o_.combings.size() <= k) throw CLI::RequiredError("--combing (" + std::to_string(k + 1) + " needed)");
        Combing X = read_combing(o_.combings[k], mesh());
        if (k == 0 && !o_.sigma.empty())
            for (const auto& [v, s] : read_json(o_.sigma).items()) X.sigma[std::stoi(v)] = Vec3(s.at(0), s.at(1), s.at(2));
        return X;
    }
    LPSurgeryDatum datum(size_t k) {
        if (o_.surgeries.size() <= k) throw CLI::RequiredError("--surgery (" + std::to_string(k + 1) + " needed)");
        return read_datum(o_.surgeries[k]);
    }
    json& diag() { return report_["diagnostics"]; }

    json validate() {
        auto D = validate_manifold(mesh());
        json r = {{"valid", D.ok()}, {"violations", D.violations}};
        if (!o_.combings.empty()) {
            auto C = validate_combing(mesh(), combing(0));
            r["combing_valid"] = C.ok();
            r["combing_violations"] = C.violations;
            if (!C.ok()) throw Error("InvalidCombing", C.violations.front());
        }
        if (!D.ok()) throw Error("InvalidMesh", D.violations.front());
        return r;
    }
    json homology() {
        auto H = homology_of(mesh());
        json r = {{"betti", {H->betti(0), H->betti(1), H->betti(2), H->betti(3)}}, {"euler_characteristic", H->euler_characteristic()}};
        auto q = is_qhh(mesh());
        r["rational_homology_handlebody"] = q.ok;
        if (q.ok) r["genus"] = q.genus;
        return r;
    }
    json coincidence() {
        const FramedMesh& m = mesh();
        Combing X = combing(0), Y = combing(1);
        auto pp = perturb_pair(m, X, Y, o_.seed);
        PLLink L = coincidence_link(m, X, pp.Y, o_.sign);
        if (!o_.out.empty()) write_json(o_.out, link_to_json(L));
        auto H = homology_of(m);
        diag()["perturbation_retries"] = pp.retries;
        return {{"loops", L.loops.size()}, {"segments", L.num_segments()}, {"class", coords_json(H->coords(snap_to_cycle(m, L)))}};
    }
    json lk() {
        need(o_.l1, "--l1");
        need(o_.l2, "--l2");
        const FramedMesh& m = mesh();
        PLLink a = link_from_json(read_json(o_.l1)), b = link_from_json(read_json(o_.l2));
        Q v = linking_number(m, a, b);
        if (o_.check) {
            Q w = linking_number(m, b, a);
            diag()["symmetric"] = (v == w);
            if (v != w) throw Error("CheckFailed", "lk is not symmetric: " + to_string(v) + " vs " + to_string(w));
        }
        return rational_json(v);
    }
    json euler() {
        const FramedMesh& m = mesh();
        Combing X = combing(0);
        PLLink E = euler_zero_chain(m, X, o_.seed);
        auto c = homology_of(m)->coords(snap_to_cycle(m, E));
        bool torsion = std::all_of(c.begin(), c.end(), [](const Q& q) { return sgn(q) == 0; });
        return {{"class", coords_json(c)}, {"torsion", torsion}};
    }
    json validate_lp_cmd() {
        const FramedMesh& m = mesh();
        std::optional<Combing> X;
        if (!o_.combings.empty()) X = combing(0);
        json all = json::array();
        bool ok = true;
        for (size_t k = 0; k < o_.surgeries.size(); ++k) {
            auto rep = validate_lp(m, datum(k), X ? &*X : nullptr);
            ok = ok && rep.ok;
            all.push_back({{"ok", rep.ok}, {"genus_A", rep.genus_A}, {"genus_B", rep.genus_B}, {"problems", rep.problems}});
        }
        if (o_.surgeries.empty()) throw CLI::RequiredError("--surgery");
        if (!ok) {
            diag()["reports"] = all;
            throw Error("NotLagrangianPreserving", "surgery datum fails the LP check");
        }
        return all;
    }
    std::vector<int> subset(size_t n) {
        std::vector<int> I;
        if (o_.subset.empty()) {
            for (size_t k = 0; k < n; ++k) I.push_back(static_cast<int>(k));
            return I;
        }
        std::stringstream ss(o_.subset);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            int k = std::stoi(tok);
            if (k < 0 || k >= static_cast<int>(n)) throw CLI::ValidationError("--subset", "index out of range");
            I.push_back(k);
        }
        return I;
    }
    json surgery() {
        const FramedMesh& m = mesh();
        std::optional<Combing> X;
        if (!o_.combings.empty()) X = combing(0);
        std::vector<LPSurgeryDatum> data;
        for (size_t k = 0; k < o_.surgeries.size(); ++k) data.push_back(datum(k));
        if (data.empty()) throw CLI::RequiredError("--surgery");
        Surgered s = perform(m, X ? &*X : nullptr, data, subset(data.size()));
        if (!o_.out.empty()) {
            write_json(o_.out, mesh_to_json(s.mesh));
            if (s.X) write_json(o_.out + ".combing.json", combing_to_json(*s.X, o_.out));
        }
        auto H = homology_of(s.mesh);
        return {{"vertices", s.mesh.num_vertices}, {"tets", s.mesh.num_tets()}, {"betti1", H->betti(1)}};
    }
    json p1() {
        const FramedMesh& m = mesh();
        Combing X = combing(0), Y = combing(1);
        P1Info info;
        Q v = p1_diff(m, X, Y, o_.seed, &info);
        diag()["perturbation_seed"] = info.seed;
        diag()["retries"] = info.retries;
        if (o_.check) {
            Q w = p1_diff(m, Y, X, o_.seed);
            diag()["antisymmetric"] = (v == -w);
            if (v != -w) throw Error("CheckFailed", "p1 difference is not antisymmetric");
        }
        return rational_json(v);
    }
    json variation() {
        const FramedMesh& m = mesh();
        Combing X = combing(0);
        auto d1 = datum(0), d2 = datum(1);
        Q v = second_order_variation(m, X, d1, d2, o_.seed);
        if (o_.check && is_copy(m, d1) && is_copy(m, d2)) {
            Q c = closed_alternating_sum(m, X, d1, d2, o_.seed);
            diag()["closed_sum"] = rational_json(c);
            if (c != v) throw Error("CheckFailed", "closed sum " + to_string(c) + " differs from variation " + to_string(v));
        }
        return rational_json(v);
    }
    json finite_type() {
        const FramedMesh& m = mesh();
        auto r = finite_type_check(m, combing(0), datum(0), datum(1), datum(2), o_.seed);
        diag()["variation_before"] = rational_json(r.variation_before);
        diag()["variation_after"] = rational_json(r.variation_after);
        if (r.closed_value) diag()["closed_value"] = rational_json(*r.closed_value);
        return rational_json(r.value);
    }
    PseudoParModel model_from_config() {
        PseudoParConfig c;
        if (!o_.config.empty()) {
            c = model_config_from_json(read_json(o_.config));
            report_["inputs"]["config"] = o_.config;
        }
        return build_model(c);
    }
    json model() {
        PseudoParConfig c;
        if (!o_.config.empty()) c = model_config_from_json(read_json(o_.config));
        json r;
        int hol = lift_holonomy(c);
        r["lift_holonomy"] = hol;
        diag()["lift_holonomy"] = hol;
        if (hol != 1) throw Error("LiftObstruction", "boundary rotations do not lift to a closed loop in SU(2)");
        PseudoParModel m = build_model(c);
        r["sweeps"] = m.sweeps;
        r["meridian_degree_d"] = meridian_degree(m, 'd');
        r["meridian_degree_g"] = meridian_degree(m, 'g');
        json ex = json::array();
        for (const auto& e : exceptional_params(m)) ex.push_back({{"t", e.t}, {"u", e.u}, {"orientation", e.orientation}});
        r["exceptional"] = ex;
        ModelHost h = solid_torus_host(m);
        auto H = homology_of(h.mesh);
        Siamese s = siamese_sections(m, h);
        r["gamma"] = coords_json(H->coords(h.gamma));
        r["euler_d"] = coords_json(H->coords(snap_to_cycle(h.mesh, euler_zero_chain(h.mesh, s.d, o_.seed))));
        r["euler_g"] = coords_json(H->coords(snap_to_cycle(h.mesh, euler_zero_chain(h.mesh, s.g, o_.seed))));
        return r;
    }
    json bracket() {
        PseudoParModel m = model_from_config();
        ModelHost h = s3_host(m);
        Combing X = model_combing(m, h);
        if (o_.homotopy > 0) X = bump_homotopy(m, h, X, static_cast<uint64_t>(o_.homotopy), o_.peak);
        BracketInfo info;
        Q v = pseudopar_bracket(m, h, X, o_.seed, &info);
        diag()["lk"] = rational_json(info.lk);
        diag()["correction"] = info.correction;
        diag()["exceptional_components"] = info.components;
        diag()["tets"] = h.mesh.num_tets();
        return rational_json(v);
    }
    json hopf() {
        HopfDemo d = hopf_demo({}, o_.seed);
        diag()["tets"] = d.tets;
        diag()["class1"] = coords_json(d.class1);
        diag()["class2"] = coords_json(d.class2);
        diag()["variation"] = rational_json(d.variation);
        diag()["closed_sum"] = rational_json(d.closed_sum);
        if (o_.check && d.variation != d.closed_sum) throw Error("CheckFailed", "variation and closed sum differ");
        return rational_json(d.closed_sum);
    }

private:
    const Opts& o_;
    json& report_;
    std::optional<FramedMesh> mesh_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"combing-forge: exact invariants of combings on triangulated 3-manifolds", "combing-forge"};
    app.require_subcommand(1, 1);
    Opts o;
    auto common = [&](CLI::App* s) {
        s->add_option("--mesh", o.mesh, "mesh JSON");
        s->add_option("--combing", o.combings, "combing JSON (repeatable)");
        s->add_option("--sigma", o.sigma, "boundary section overrides for the first combing");
        s->add_option("--surgery", o.surgeries, "surgery datum JSON (repeatable)");
        s->add_option("--subset", o.subset, "comma-separated surgery indices");
        s->add_option("--seed", o.seed, "perturbation seed");
        s->add_flag("--check", o.check, "run internal cross-checks");
        s->add_flag("--timings", o.timings, "include wall-clock timings in the report");
        s->add_option("--json", o.json_out, "write the report here");
    };
    struct Cmd {
        const char* name;
        const char* help;
    };
    const Cmd cmds[] = {{"validate", "check a mesh (and combing)"},
                        {"homology", "Betti numbers"},
                        {"coincidence", "coincidence link of two combings"},
                        {"lk", "linking number of two links"},
                        {"euler", "Euler zero-set class of a combing"},
                        {"validate-lp", "check surgery data"},
                        {"surgery", "perform surgeries"},
                        {"p1-diff", "p1 difference of two combings"},
                        {"variation", "second-order variation of p1"},
                        {"finite-type", "degree-2 finite type check"},
                        {"bracket", "bracket against the model pseudo-parallelization"},
                        {"model", "build and check the model pseudo-parallelization"},
                        {"hopf-demo", "the Hopf fiber example"}};
    std::map<std::string, CLI::App*> sub;
    for (const auto& c : cmds) {
        auto* s = app.add_subcommand(c.name, c.help);
        common(s);
        sub[c.name] = s;
    }
    sub["coincidence"]->add_option("--out", o.out, "write the link here");
    sub["coincidence"]->add_option("--sign", o.sign, "+1 for X = Y, -1 for X = -Y")->check(CLI::IsMember({-1, 1}));
    sub["surgery"]->add_option("--out", o.out, "write the surgered mesh here");
    sub["lk"]->add_option("--l1", o.l1, "first link JSON");
    sub["lk"]->add_option("--l2", o.l2, "second link JSON");
    for (const char* n : {"model", "bracket"}) sub[n]->add_option("--config", o.config, "model config JSON");
    sub["bracket"]->add_option("--homotopy", o.homotopy, "seed of a bump homotopy applied to the combing (0: none)");
    sub["bracket"]->add_option("--peak", o.peak, "peak rotation angle of the homotopy");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }
    std::string name = app.get_subcommands().front()->get_name();
    json report;
    report["command"] = name;
    report["inputs"] = json::object();
    report["seed"] = o.seed;
    report["result"] = nullptr;
    report["diagnostics"] = json::object();
    auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    try {
        Runner r(o, report);
        for (size_t k = 0; k < o.combings.size(); ++k) report["inputs"]["combing"].push_back(o.combings[k]);
        for (size_t k = 0; k < o.surgeries.size(); ++k) report["inputs"]["surgery"].push_back(o.surgeries[k]);
        json res;
        if (name == "validate") res = r.validate();
        else if (name == "homology") res = r.homology();
        else if (name == "coincidence") res = r.coincidence();
        else if (name == "lk") res = r.lk();
        else if (name == "euler") res = r.euler();
        else if (name == "validate-lp") res = r.validate_lp_cmd();
        else if (name == "surgery") res = r.surgery();
        else if (name == "p1-diff") res = r.p1();
        else if (name == "variation") res = r.variation();
        else if (name == "finite-type") res = r.finite_type();
        else if (name == "bracket") res = r.bracket();
        else if (name == "model") res = r.model();
        else res = r.hopf();
        report["result"] = res;
    } catch (const CLI::Error& e) {
        err << name << ": " << e.what() << "\n" << sub[name]->help();
        return 2;
    } catch (const Error& e) {
        report["error"] = {{"kind", e.kind()}, {"message", e.what()}};
        err << e.what() << "\n";
        code = 1;
    }
    if (o.timings)
        report["timings"] = {{"total_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    std::string text = report.dump(2) + "\n";
    out << text;
    if (!o.json_out.empty()) {
        std::ofstream f(o.json_out);
        if (!f) {
            err << "cannot write " << o.json_out << "\n";
            return 1;
        }
        f << text;
    }
    return code;
}

}  // namespace cf
