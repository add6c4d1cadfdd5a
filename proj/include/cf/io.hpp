// JSON files for meshes, combings, links, surgery data and model configs.
#pragma once
#include <json.hpp>
#include <string>

#include "cf/coincidence.hpp"
#include "cf/combing.hpp"
#include "cf/mesh.hpp"
#include "cf/pseudopar.hpp"
#include "cf/surgery.hpp"

namespace cf {

using json = nlohmann::ordered_json;

json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);

// Exact rationals are written as "p/q".
json rational_json(const Q& q);

json mesh_to_json(const FramedMesh& m);
// Finalized; throws InvalidMesh.
FramedMesh mesh_from_json(const json& j);
FramedMesh read_mesh(const std::string& path);

json combing_to_json(const Combing& X, const std::string& mesh_path = "");
// Sigma defaults to the frame's second vector where the file gives none.
Combing combing_from_json(const json& j, const FramedMesh& m);
Combing read_combing(const std::string& path, const FramedMesh& m);

// Loops as lists of {tet, in_face, out_face, in: [4 "p/q"], out: [...]}; optional "mult".
json link_to_json(const PLLink& L);
PLLink link_from_json(const json& j);

// Paths inside the datum are relative to base_dir.
LPSurgeryDatum datum_from_json(const json& j, const std::string& base_dir);
LPSurgeryDatum read_datum(const std::string& path);

PseudoParConfig model_config_from_json(const json& j);

}  // namespace cf
