#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rdent/geometry.hpp"

namespace rdent {

enum class BoundaryTag { left, right, bottom, top, other };
enum class Diagonal { fixed, alternating };
enum class Continuity { continuous, discontinuous };

std::string to_string(BoundaryTag tag);

struct InteriorFace {
    int elem_a;
    int local_a;
    int elem_b;
    int local_b;
};

struct BoundaryFace {
    int elem;
    int local;
    BoundaryTag tag;
};

/// Neighbour across local face f of an element. `elem < 0` on the boundary,
/// in which case `boundary` indexes Mesh::boundary_faces().
struct FaceLink {
    int elem = -1;
    int local = -1;
    int boundary = -1;
    int interior = -1;
};

/// Conformal triangulation. Local face f is the edge opposite local vertex f,
/// traversed from vertex f+1 to vertex f+2 (mod 3).
class Mesh {
public:
    Mesh() = default;
    /// Reorients clockwise triangles, builds the face tables and tags boundary
    /// faces by the side of the bounding box they lie on.
    Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> elements);

    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& elements() const { return elements_; }
    const std::vector<InteriorFace>& interior_faces() const { return interior_; }
    const std::vector<BoundaryFace>& boundary_faces() const { return boundary_; }

    int n_vertices() const { return static_cast<int>(vertices_.size()); }
    int n_elements() const { return static_cast<int>(elements_.size()); }

    Vec2 vertex(int e, int l) const { return vertices_[elements_[e][l]]; }
    double area(int e) const { return geo_[e].area; }
    /// Longest edge.
    double diameter(int e) const { return geo_[e].diameter; }
    /// Outward normal of local face f scaled by the face length.
    Vec2 scaled_normal(int e, int f) const { return geo_[e].normal[f]; }
    double face_length(int e, int f) const { return geo_[e].length[f]; }
    /// Gradient of barycentric coordinate l (constant on the element).
    Vec2 grad_lambda(int e, int l) const { return geo_[e].grad[l]; }
    const FaceLink& link(int e, int f) const { return links_[3 * e + f]; }
    /// Physical point of barycentric coordinates b in element e.
    Vec2 map(int e, const Bary& b) const;
    Rect bounds() const { return bounds_; }
    double total_area() const;

private:
    struct Geometry {
        double area;
        double diameter;
        std::array<Vec2, 3> normal;
        std::array<double, 3> length;
        std::array<Vec2, 3> grad;
    };

    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> elements_;
    std::vector<InteriorFace> interior_;
    std::vector<BoundaryFace> boundary_;
    std::vector<FaceLink> links_;
    std::vector<Geometry> geo_;
    Rect bounds_;
};

/// Uniform bin grid over element bounding boxes.
class PointLocator {
public:
    explicit PointLocator(const Mesh& mesh, int bins_per_side = 0);
    /// Element containing p (closest on ties/outside within tol), -1 if none.
    int locate(const Vec2& p, double tol = 1e-12) const;

private:
    const Mesh* mesh_;
    Rect box_;
    int nb_;
    std::vector<std::vector<int>> bins_;
};

/// Barycentric coordinates of p with respect to element e.
Bary barycentric(const Mesh& mesh, int e, const Vec2& p);

/// Split-square triangulation with 2*nx*ny triangles.
/// fixed: every cell is cut along the same diagonal (lower-left to upper-right);
/// alternating: the cut flips with the cell parity.
Mesh build_rect_mesh(const Rect& bounds, int nx, int ny, Diagonal diagonal = Diagonal::fixed,
                     double perturbation = 0.0);

/// ASCII format: `nv ne`, nv lines `x y`, ne lines `v0 v1 v2` (0-based).
Mesh read_mesh(std::istream& in);
void write_mesh(std::ostream& out, const Mesh& mesh);
/// Legacy VTK POLYDATA of the triangulation (no fields).
void write_mesh_vtk(std::ostream& out, const Mesh& mesh);

/// Global numbering of the P1/P2 Lagrange points.
/// Local order: vertices 0,1,2, then midpoints of edges (0,1), (1,2), (2,0).
class DofMap {
public:
    DofMap() = default;
    DofMap(int degree, Continuity continuity, int per_element, std::vector<int> element_dofs,
           std::vector<Vec2> dof_points);

    int degree() const { return degree_; }
    Continuity continuity() const { return continuity_; }
    int dofs_per_element() const { return per_element_; }
    int n_dofs() const { return static_cast<int>(points_.size()); }
    int n_elements() const { return per_element_ > 0 ? static_cast<int>(dofs_.size()) / per_element_ : 0; }
    std::span<const int> element_dofs(int e) const {
        return {dofs_.data() + static_cast<std::size_t>(e) * per_element_,
                static_cast<std::size_t>(per_element_)};
    }
    const std::vector<Vec2>& dof_points() const { return points_; }

private:
    int degree_ = 1;
    Continuity continuity_ = Continuity::continuous;
    int per_element_ = 3;
    std::vector<int> dofs_;
    std::vector<Vec2> points_;
};

DofMap build_dof_map(const Mesh& mesh, int degree, Continuity continuity);

/// Local DoF indices lying on local face f: the two face vertices (in
/// traversal order) and, for P2, the face midpoint.
std::vector<int> face_local_dofs(int degree, int f);

struct FacePointPair {
    Vec2 from_a;
    Vec2 from_b;
    Vec2 normal_a;  ///< outward unit normal seen from element A
    Vec2 normal_b;  ///< outward unit normal seen from element B
    double weight;  ///< normalized weight, sums to 1 over the face
};

/// Quadrature points of interior face `face` evaluated from both sides, paired.
std::vector<FacePointPair> face_pairing(const Mesh& mesh, const DofMap& dofmap, int face);

/// For interior face (A, fa, B, fb): index in B's traversal of point q of A's.
int paired_point(const Mesh& mesh, const InteriorFace& face, int q, int n_points);

}  // namespace rdent
