// Small mesh generators used by tests, the CLI and the bundled example.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "cf/homology.hpp"
#include "cf/mesh.hpp"

namespace cf {

using Vec4 = Eigen::Vector4d;

// A convex polyhedral cell: vertex ids, polygon faces (cyclic), and positions
// used only to orient the tets.
struct Cell {
    std::vector<int> verts;
    std::vector<std::vector<int>> faces;
    std::vector<Vec4> pos;  // parallel to verts
    std::string region;
};

Cell cube_cell(const std::array<int, 8>& v, const std::array<Vec4, 8>& p, const std::string& region);
// Triangles (v0,v1,v2) and (v3,v4,v5) with vi ~ vi+3.
Cell prism_cell(const std::array<int, 6>& v, const std::array<Vec4, 6>& p, const std::string& region);

struct CellTriangulation {
    FramedMesh mesh;
    std::vector<int> tet_cell;
};

// Pulling triangulation by global vertex order: each cell is coned from its
// lowest vertex over the faces missing it, polygons fanned from their lowest vertex.
// spherical: positions lie on S^3 and orientation is sign det[p0 p1 p2 p3];
// otherwise sign det[p1-p0, p2-p0, p3-p0] on the first three coordinates.
CellTriangulation triangulate_cells(int num_vertices, const std::vector<Cell>& cells, bool spherical);

FramedMesh single_tet();
// Two tets with the same four vertices, glued along all faces.
FramedMesh two_tet_s3();

// Chain along a closed vertex loop; consecutive vertices must span a unique edge.
Chain edge_loop(const FramedMesh& m, const std::vector<int>& loop);

// [0,w]^2 x Z_m built from cubes; disk coordinates (i, j), circle coordinate k.
struct SolidTorus {
    FramedMesh mesh;
    int w = 0, m = 0;
    std::vector<std::array<int, 3>> ijk;
    int vid(int i, int j, int k) const;
    std::vector<int> meridian_loop(int k) const;  // boundary of the disk at k, counterclockwise
    std::vector<int> longitude_loop(int i, int j) const;
};
SolidTorus solid_torus(int w, int m, const std::string& region = "M");

// (planar grid with two square holes) x [0,1].
FramedMesh genus2_handlebody();

// S^2 x S^1 from octahedron triangles x Z_m prisms; sphere_point per vertex.
struct S2xS1 {
    FramedMesh mesh;
    std::vector<Vec3> sphere_point;
    std::vector<int> layer;
};
S2xS1 s2_x_s1(int m);

// S^3 layered by Hopf tori: z1 = sqrt(r) e^{i phi1}, z2 = sqrt(1-r) e^{i phi2}, r = l/k.
struct HopfConfig {
    int n = 16;      // samples of each angle
    int k = 10;      // layers between the two cores
    int a = 4;       // tube thickness in layers
    bool third_tube = false;
    int third_j0 = 4, third_l0 = 4, third_w = 2;  // ring of cubes parallel to the phi1 core
};

struct TubeChart {
    std::string region;
    std::vector<int> vertices;          // mesh vertices of the tube
    std::vector<double> rho, angle;     // disk polar coordinates per listed vertex
    std::vector<int> core;              // core loop oriented along the circle factor
};

struct HopfMesh {
    FramedMesh mesh;
    HopfConfig cfg;
    std::vector<Vec4> pos;
    std::vector<std::array<int, 3>> ijl;  // (i, j, l); cores use -1 for the collapsed angle
    std::vector<int> core1, core2;        // z2 = 0 (phi1 increasing), z1 = 0 (phi2 increasing)
    int vid(int i, int j, int l) const;
    std::vector<TubeChart> tubes;         // A1 (around core1), A2 (around core2), optional A3
    // Faces of the half-disk {phi2 = 0} ... bounded by core2: an oracle Seifert surface.
    Chain seifert_disk_core2() const;
};
HopfMesh hopf_s3(const HopfConfig& cfg = {});

}  // namespace cf
