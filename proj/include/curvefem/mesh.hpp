#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "curvefem/geometry.hpp"
#include "curvefem/reference.hpp"
#include "curvefem/vecmat.hpp"

namespace cfem {

/// Simplicial mesh with straight cells. Cells are triangles; the ambient
/// dimension is 2 (planar meshes of a 2D domain) or 3 (meshes of a closed
/// surface, in which case there are no boundary faces and every vertex lies
/// on the surface).
///
/// Local edge i of a cell connects local vertices (i+1)%3 and (i+2)%3.
struct AffineMesh {
  int ambient_dim = 2;
  bool surface = false;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<std::uint8_t> boundary_vertex;
  std::vector<std::pair<int, int>> boundary_faces; // (cell, local edge)
  double h = 0.0;                                  // max cell diameter

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  const Vec3& cell_vertex(int c, int i) const { return vertices[cells[c][i]]; }
  double cell_diameter(int c) const;
  std::array<std::uint8_t, 3> cell_eps(int c) const;

  /// Affine map F_T from the reference triangle and its (constant) Jacobian.
  Vec3 affine_map(int c, const Vec3& xref) const;
  Mat3 affine_jacobian(int c) const;
};

enum class CellClass { Internal, Boundary };

/// Boundary cells have at least two vertices on the boundary; on surface
/// meshes every cell is a boundary cell.
CellClass classify(const AffineMesh& mesh, int cell);

struct EdgeTopology {
  std::vector<std::array<int, 2>> edges;      // sorted vertex pairs
  std::vector<std::array<int, 3>> cell_edges; // per cell, local edge -> edge id
  std::vector<std::array<int, 2>> edge_cells; // incident cells, -1 if none
};
EdgeTopology build_edges(const AffineMesh& mesh);

/// Checks the mesh invariants: watertightness, boundary vertices on the
/// zero level set (when a domain is given), no cell with all vertices on
/// the boundary, boundary-flag consistency, positive orientation.
/// Throws MeshError on violation.
void validate_mesh(const AffineMesh& mesh, const ImplicitDomain* domain);

double max_min_diameter_ratio(const AffineMesh& mesh);

// Built-in generators --------------------------------------------------------

/// Concentric-ring triangulation of the unit disk with n rings and one
/// Laplacian smoothing pass on interior vertices; boundary vertices sit
/// exactly on the unit circle. h ~ 1/n.
AffineMesh generate_disk_mesh(int n);

/// Icosahedron subdivided `level` times with radial projection to the unit
/// sphere.
AffineMesh generate_sphere_surface_mesh(int level);

/// Ring mesh morphed onto the star-shaped domain r(theta) = 1 + a sin(m theta).
AffineMesh generate_flower_mesh(int n, double a = 0.3, int m = 3);

/// Structured triangulation of the unit square (polygonal test meshes).
AffineMesh generate_square_mesh(int n);

/// Uniform red refinement; midpoints of boundary edges (all new vertices on
/// surface meshes) are projected back onto the boundary.
AffineMesh refine(const AffineMesh& mesh, const ImplicitDomain* domain);

// Exact and interpolated geometry --------------------------------------------

/// The exact element map: internal cells are affine, boundary cells get the
/// projection-based correction that pins the boundary face onto the zero
/// level set. Throws OutsideTubularNeighborhood when the mesh is too coarse
/// for the geometry.
Vec3 exact_map(const AffineMesh& mesh, const ImplicitDomain& domain, int cell, const Vec3& xref,
               int r);

/// Reference point on local edge `edge` at parameter t in [0,1], oriented
/// from local vertex (edge+1)%3 to (edge+2)%3. The barycentric coordinate
/// of the opposite vertex is exactly zero.
Vec3 edge_point_ref(int edge, double t);

struct MapEval {
  Vec3 x;
  Mat3 jacobian; // ambient_dim x 2
  double jdet;   // det (planar) or sqrt(det gram) (surface)
};

/// Mesh with per-cell degree-r geometric control points interpolating the
/// exact map at the P^r Lagrange lattice. Immutable after construction.
class CurvedMesh {
public:
  CurvedMesh(std::shared_ptr<const AffineMesh> parent, DomainPtr domain, int r);

  const AffineMesh& affine() const { return *parent_; }
  std::shared_ptr<const AffineMesh> parent() const { return parent_; }
  const ImplicitDomain* domain() const { return domain_.get(); }
  DomainPtr domain_ptr() const { return domain_; }
  int degree() const { return r_; }
  int ambient_dim() const { return parent_->ambient_dim; }
  const LagrangeBasis& geometry_basis() const { return geom_basis_; }
  int n_cells() const { return parent_->n_cells(); }
  CellClass cell_class(int c) const { return classes_[c]; }

  const Vec3* control_points(int c) const {
    return control_points_.data() + static_cast<std::size_t>(c) * geom_basis_.size();
  }

  /// Geometric map F^(r) and its Jacobian; throws DegenerateElement when the
  /// Jacobian determinant is not positive.
  MapEval map(int cell, const Vec3& xref) const;
  Vec3 map_point(int cell, const Vec3& xref) const;

  /// Largest |signed distance| over the boundary quadrature points, a proxy
  /// for the geometric distance between the discrete and exact boundaries.
  double max_boundary_distance(int quad_order = 19) const;

private:
  std::shared_ptr<const AffineMesh> parent_;
  DomainPtr domain_;
  int r_;
  LagrangeBasis geom_basis_;
  std::vector<Vec3> control_points_;
  std::vector<CellClass> classes_;
};

/// Interpolates the exact map at the P^r lattice of every cell.
CurvedMesh elevate(std::shared_ptr<const AffineMesh> mesh, DomainPtr domain, int r);

// I/O -------------------------------------------------------------------------

/// MSH ASCII v2.2 import (nodes + 2-node line / 3-node triangle elements).
/// Boundary vertices are snapped onto the domain boundary; the largest snap
/// distance is returned through max_snap.
AffineMesh import_msh(const std::string& path, DomainPtr domain, double* max_snap = nullptr);

/// Legacy VTK ASCII export; curved cells are linearized by sub-sampling the
/// reference triangle. Visualization only.
void export_vtk(const CurvedMesh& mesh, const std::string& path,
                const std::vector<double>* vertex_values = nullptr);

} // namespace cfem
