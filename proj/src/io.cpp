#include "cf/io.hpp"

#include <filesystem>
#include <fstream>

#include "cf/errors.hpp"

namespace cf {

namespace {

std::string join(const std::string& base, const std::string& p) {
    if (p.empty() || std::filesystem::path(p).is_absolute()) return p;
    return (std::filesystem::path(base) / p).string();
}

template <class F>
auto guarded(const std::string& what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error("InvalidInput", what + ": " + e.what());
    }
}

}  // namespace

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IOError", "cannot read " + path);
    return guarded(path, [&] { return json::parse(in); });
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("IOError", "cannot write " + path);
    out << j.dump(2) << "\n";
}

json rational_json(const Q& q) { return to_string(q); }

json mesh_to_json(const FramedMesh& m) {
    json j;
    j["vertices"] = m.num_vertices;
    j["tets"] = m.tets;
    j["orientations"] = m.orientation;
    json g = json::array();
    for (const auto& fg : m.glue) g.push_back(json::array({json::array({fg.t0, fg.f0}), json::array({fg.t1, fg.f1}), fg.perm}));
    j["face_glue"] = g;
    json r = json::object();
    for (const auto& [name, ts] : m.regions) r[name] = ts;
    j["regions"] = r;
    json tr = json::array();
    for (const auto& t : m.transitions) {
        std::vector<double> rot;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) rot.push_back(t.rot(a, b));
        tr.push_back({{"vertex", t.vertex}, {"from", t.from}, {"to", t.to}, {"rot", rot}});
    }
    j["transitions"] = tr;
    return j;
}

FramedMesh mesh_from_json(const json& j) {
    FramedMesh m = guarded("mesh", [&] {
        FramedMesh m;
        m.num_vertices = j.at("vertices").get<int>();
        m.tets = j.at("tets").get<std::vector<std::array<int, 4>>>();
        m.orientation = j.contains("orientations") ? j.at("orientations").get<std::vector<int>>()
                                                   : std::vector<int>(m.tets.size(), 1);
        if (j.contains("regions"))
            for (const auto& [name, ts] : j.at("regions").items()) m.regions[name] = ts.get<std::vector<int>>();
        else {
            std::vector<int> all(m.tets.size());
            for (size_t t = 0; t < all.size(); ++t) all[t] = static_cast<int>(t);
            m.regions["M"] = all;
        }
        if (j.contains("face_glue")) {
            for (const auto& g : j.at("face_glue")) {
                FaceGlue fg;
                fg.t0 = g.at(0).at(0), fg.f0 = g.at(0).at(1), fg.t1 = g.at(1).at(0), fg.f1 = g.at(1).at(1);
                fg.perm = g.at(2).get<std::array<int, 4>>();
                m.glue.push_back(fg);
            }
        } else {
            glue_by_vertices(m);
        }
        if (j.contains("transitions"))
            for (const auto& t : j.at("transitions")) {
                auto r = t.at("rot").get<std::vector<double>>();
                if (r.size() != 9) throw Error("InvalidMesh", "rot needs 9 entries");
                Mat3 R;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) R(a, b) = r[3 * a + b];
                m.transitions.push_back({t.at("vertex").get<int>(), t.at("from").get<std::string>(), t.at("to").get<std::string>(), R});
            }
        return m;
    });
    m.finalize();
    return m;
}

FramedMesh read_mesh(const std::string& path) { return mesh_from_json(read_json(path)); }

json combing_to_json(const Combing& X, const std::string& mesh_path) {
    json j;
    if (!mesh_path.empty()) j["mesh"] = mesh_path;
    json v = json::array();
    for (const auto& x : X.vec) v.push_back({x.x(), x.y(), x.z()});
    j["vectors"] = v;
    json s = json::object();
    for (const auto& [k, x] : X.sigma) s[std::to_string(k)] = {x.x(), x.y(), x.z()};
    j["sigma"] = s;
    return j;
}

Combing combing_from_json(const json& j, const FramedMesh& m) {
    return guarded("combing", [&] {
        Combing X;
        for (const auto& v : j.at("vectors")) X.vec.push_back(Vec3(v.at(0), v.at(1), v.at(2)));
        if (static_cast<int>(X.vec.size()) != m.num_vertices) throw Error("InvalidArgument", "combing has wrong number of vectors");
        X.sigma = default_sigma(m, X.vec);
        if (j.contains("sigma"))
            for (const auto& [k, v] : j.at("sigma").items()) X.sigma[std::stoi(k)] = Vec3(v.at(0), v.at(1), v.at(2));
        return X;
    });
}

Combing read_combing(const std::string& path, const FramedMesh& m) { return combing_from_json(read_json(path), m); }

json link_to_json(const PLLink& L) {
    json loops = json::array();
    for (const auto& l : L.loops) {
        json segs = json::array();
        for (const auto& s : l.segs) {
            json in = json::array(), out = json::array();
            for (int a = 0; a < 4; ++a) in.push_back(to_string(s.in[a])), out.push_back(to_string(s.out[a]));
            segs.push_back({{"tet", s.tet}, {"in_face", s.in_face}, {"out_face", s.out_face}, {"in", in}, {"out", out}});
        }
        loops.push_back({{"mult", to_string(l.mult)}, {"segments", segs}});
    }
    return {{"loops", loops}};
}

PLLink link_from_json(const json& j) {
    return guarded("link", [&] {
        PLLink L;
        for (const auto& lj : j.at("loops")) {
            Loop l;
            if (lj.contains("mult")) l.mult = parse_rational(lj.at("mult").get<std::string>());
            for (const auto& sj : lj.at("segments")) {
                Segment s;
                s.tet = sj.at("tet");
                s.in_face = sj.at("in_face");
                s.out_face = sj.at("out_face");
                for (int a = 0; a < 4; ++a) {
                    s.in[a] = parse_rational(sj.at("in").at(a).get<std::string>());
                    s.out[a] = parse_rational(sj.at("out").at(a).get<std::string>());
                }
                l.segs.push_back(s);
            }
            L.loops.push_back(l);
        }
        return L;
    });
}

LPSurgeryDatum datum_from_json(const json& j, const std::string& base_dir) {
    return guarded("surgery datum", [&] {
        LPSurgeryDatum d;
        d.region = j.at("region").get<std::string>();
        d.B = read_mesh(join(base_dir, j.at("replacement_mesh").get<std::string>()));
        for (const auto& p : j.at("boundary_map")) d.h.vmap[p.at(0).get<int>()] = p.at(1).get<int>();
        if (j.contains("replacement_combing") && !j.at("replacement_combing").is_null())
            d.XB = read_combing(join(base_dir, j.at("replacement_combing").get<std::string>()), d.B);
        return d;
    });
}

LPSurgeryDatum read_datum(const std::string& path) {
    return datum_from_json(read_json(path), std::filesystem::path(path).parent_path().string());
}

PseudoParConfig model_config_from_json(const json& j) {
    return guarded("model config", [&] {
        PseudoParConfig c;
        c.a = j.value("a", c.a);
        c.b = j.value("b", c.b);
        c.eps = j.value("eps", c.eps);
        c.grid_t = j.value("grid_t", c.grid_t);
        c.grid_u = j.value("grid_u", c.grid_u);
        c.corrupt = j.value("corrupt", c.corrupt);
        return c;
    });
}

}  // namespace cf
