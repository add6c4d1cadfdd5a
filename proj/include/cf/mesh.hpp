// Oriented tetrahedral Delta-complexes with regions and frame transitions.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace cf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Face i of a tet is the face opposite local vertex i.
struct FaceGlue {
    int t0, f0, t1, f1;
    // perm[a] = local index in t1 of the vertex glued to local vertex a of t0.
    std::array<int, 4> perm;
};

struct Transition {
    int vertex;
    std::string from, to;
    Mat3 rot;  // coordinates in `to` = rot * coordinates in `from`
};

// Combinatorial tables derived from the gluing data.
struct Topology {
    int num_edges = 0, num_faces = 0;
    // Canonical simplices.
    std::vector<std::array<int, 2>> edge_verts;
    std::vector<std::array<int, 3>> face_verts;
    std::vector<std::array<int, 3>> face_edges;   // boundary: +e0 - e1 + e2 (times signs)
    std::vector<std::array<int, 3>> face_edge_sign;
    // Incidences of each face: (tet, local face).
    std::vector<std::vector<std::pair<int, int>>> face_tets;
    // Per tet.
    std::vector<std::array<int, 4>> tet_face;       // global face of local face i
    std::vector<std::array<int, 4>> tet_face_sign;  // coefficient of that face in d(tet)
    // tet_face_corner[t][i][k] = local vertex of t at canonical corner k of face tet_face[t][i]
    std::vector<std::array<std::array<int, 3>, 4>> tet_face_corner;
    std::vector<std::array<int, 6>> tet_edge;       // local edges (01,02,03,12,13,23)
    std::vector<std::array<int, 6>> tet_edge_sign;  // +1 if local low->high matches canonical
    std::vector<std::vector<int>> vertex_tets;
    std::vector<int> region_of_tet;                 // index into region_names
    std::vector<std::string> region_names;
    std::vector<int> home_region;                   // per vertex, region of its lowest tet
    std::vector<bool> boundary_face;
    std::vector<bool> boundary_vertex;
    std::vector<bool> boundary_edge;

    // Write-once cache for the homology of this complex.
    mutable std::mutex cache_mu;
    mutable std::shared_ptr<const void> homology_cache;
};

int local_edge_index(int a, int b);  // a != b in 0..3
extern const int kLocalEdges[6][2];

class FramedMesh {
public:
    int num_vertices = 0;
    std::vector<std::array<int, 4>> tets;
    std::vector<int> orientation;  // +1 / -1 per tet
    std::vector<FaceGlue> glue;
    std::map<std::string, std::vector<int>> regions;
    std::vector<Transition> transitions;

    // Builds derived tables; throws cf::Error("InvalidMesh") on malformed gluing.
    void finalize();
    const Topology& topo() const;
    bool finalized() const { return topo_ != nullptr; }

    int num_tets() const { return static_cast<int>(tets.size()); }
    int num_edges() const { return topo().num_edges; }
    int num_faces() const { return topo().num_faces; }

    // Rotation taking coordinates in region `from` to region `to` at vertex v.
    Mat3 transition(int v, int from_region, int to_region) const;
    int region_index(const std::string& name) const;

private:
    std::shared_ptr<const Topology> topo_;
    std::map<std::tuple<int, int, int>, Mat3> trans_index_;
};

// Derives face_glue for meshes whose faces are determined by vertex triples.
void glue_by_vertices(FramedMesh& m);

struct Diagnostics {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

Diagnostics validate_manifold(const FramedMesh& m);

// Bijection from boundary vertices of `outside` to boundary vertices of `patch`.
struct BoundaryIdentification {
    std::map<int, int> vmap;
    bool reverses_orientation = true;
};

struct GlueResult {
    FramedMesh mesh;
    std::vector<int> outside_vertex;  // outside vertex id -> new id (-1 if absent)
    std::vector<int> patch_vertex;    // patch vertex id -> new id
    std::vector<int> outside_tet;     // outside tet -> new tet
    std::vector<int> patch_tet;       // patch tet -> new tet
};

// Glues `patch` onto `outside` along boundary components matched by h.
GlueResult glue(const FramedMesh& outside, const FramedMesh& patch, const BoundaryIdentification& h);

struct SubMesh {
    FramedMesh mesh;
    std::vector<int> vertex_to_parent;
    std::vector<int> tet_to_parent;
    std::map<int, int> parent_to_vertex;
};

// The sub-complex spanned by a set of tets, with local ids.
SubMesh extract(const FramedMesh& m, const std::vector<int>& tets);
SubMesh extract_region(const FramedMesh& m, const std::string& region);
// The complement of a region (all other tets).
SubMesh extract_complement(const FramedMesh& m, const std::string& region);

struct Refinement {
    FramedMesh mesh;
    // New vertex -> (kind, parent simplex id): kind 0 vertex, 1 edge, 2 face, 3 tet.
    std::vector<std::pair<int, int>> vertex_origin;
    // Refined tet -> (parent tet, permutation index 0..23).
    std::vector<std::pair<int, int>> tet_origin;
};

// Barycentric subdivision applied `levels` times (levels = 0 copies).
FramedMesh refine(const FramedMesh& m, int levels);
Refinement refine_once(const FramedMesh& m);

bool is_rotation(const Mat3& r, double tol = 1e-12);

}  // namespace cf
