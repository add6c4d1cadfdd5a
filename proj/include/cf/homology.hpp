// Rational simplicial homology of Delta-complexes.
#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cf/mesh.hpp"
#include "cf/rational.hpp"
#include "cf/sparse.hpp"

namespace cf {

using Chain = std::map<int, Q>;  // simplex id -> coefficient

struct RationalChain {
    int degree = 1;
    Chain coeff;
};

void chain_add(Chain& c, int s, const Q& q);
Chain chain_scaled(const Chain& c, const Q& q);
Chain chain_sum(const Chain& a, const Chain& b, const Q& qb = Q(1));

// Boundary maps of a complex with up to three dimensions.
struct ChainComplex {
    int num_vertices = 0;
    std::vector<std::array<int, 2>> edges;  // tail, head
    // d(face) = sum of (edge, coeff) in corner order [c1c2], [c0c2], [c0c1].
    std::vector<std::array<std::pair<int, int>, 3>> faces;
    std::vector<int> face_orient;  // coefficient of each face in the fundamental class (surfaces)
    std::vector<std::array<std::pair<int, int>, 4>> tets;
};

ChainComplex complex_of(const FramedMesh& m);

// The oriented boundary surface of a mesh. Edges keep the mesh's directions.
struct Surface {
    ChainComplex cx;
    std::vector<int> vertex_of, edge_of, face_of;  // surface id -> mesh id
    std::map<int, int> vertex_index, edge_index;   // mesh id -> surface id
};
Surface boundary_surface(const FramedMesh& m);

Chain boundary(const ChainComplex& cx, int degree, const Chain& c);

class Homology {
public:
    explicit Homology(ChainComplex cx);

    const ChainComplex& complex() const { return cx_; }
    int betti(int k) const;
    int euler_characteristic() const;
    int rank1() const { return static_cast<int>(basis1_.size()); }

    // Fundamental cycles of non-tree edges, and cocycles dual to them.
    const std::vector<Chain>& h1_basis() const { return basis1_; }
    const std::vector<Chain>& h1_cocycles() const { return cocycles1_; }

    // Coordinates of a 1-cycle in h1_basis; throws NotACycle.
    std::vector<Q> coords(const Chain& cycle) const;
    bool is_boundary(const Chain& cycle) const;
    // Some 2-chain with boundary `cycle` (free variables zero); nullopt if the class is nonzero.
    std::optional<Chain> bounding_chain(const Chain& cycle) const;
    // Representatives: degree 0 one vertex per component, 1 fundamental cycles,
    // 2 via dense reduction (small complexes only), 3 fundamental classes.
    std::vector<Chain> basis(int degree) const;

private:
    ChainComplex cx_;
    int b0_ = 0, b3_ = 0;
    std::vector<int> comp_of_vertex_;
    std::vector<bool> tree_edge_;
    std::vector<int> nontree_edges_;  // row index -> edge
    std::vector<int> row_of_edge_;
    std::unique_ptr<Elimination> elim_;
    std::map<int, int> basis_of_row_;
    std::vector<Chain> basis1_, cocycles1_;
};

// Cached homology of a finalized mesh.
std::shared_ptr<const Homology> homology_of(const FramedMesh& m);

// Matrix (columns = images of the source basis in target coordinates) of a chain map on H1.
DenseQ induced_map_h1(const Homology& src, const Homology& dst, const std::vector<std::pair<int, int>>& edge_map);
// Edge map of a sub-mesh into its parent: sub edge -> (parent edge, sign).
std::vector<std::pair<int, int>> submesh_edge_map(const SubMesh& s, const FramedMesh& parent);
// Surface edges into the mesh they bound.
std::vector<std::pair<int, int>> surface_edge_map(const Surface& s);
Chain push_chain(const Chain& c, const std::vector<std::pair<int, int>>& edge_map);

// Intersection matrix of the basis of H1 of a closed oriented surface.
DenseQ intersection_form(const Homology& surface);
Q intersection_number(const Homology& surface, const Chain& x, const Chain& y);

struct QHHReport {
    bool ok = false;
    int genus = 0;
    std::string reason;
};
QHHReport is_qhh(const FramedMesh& A);

struct Lagrangian {
    std::vector<std::vector<Q>> basis;  // coordinates in H1 of the boundary surface
    std::vector<Chain> cycles;           // as surface edge chains
};
// Kernel of H1(dA) -> H1(A). Throws NotAHandlebody when A is not a QHH.
Lagrangian lagrangian_of(const FramedMesh& A);

}  // namespace cf
