#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "curvefem/mesh.hpp"

namespace cfem {

/// Continuous P^k Lagrange space over a curved triangle mesh. DOFs are
/// entity-based: vertex DOFs shared, edge DOFs shared with the orientation
/// fixed by ascending global vertex index, interior DOFs private per cell.
class FESpace {
public:
  FESpace(std::shared_ptr<const CurvedMesh> mesh, int k);

  const CurvedMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const CurvedMesh> mesh_ptr() const { return mesh_; }
  int degree() const { return k_; }
  const LagrangeBasis& basis() const { return basis_; }
  int n_dofs() const { return n_dofs_; }
  int n_local() const { return basis_.size(); }

  int global_dof(int cell, int local) const {
    return dof_map_[static_cast<std::size_t>(cell) * basis_.size() + local];
  }

  /// DOFs whose Lagrange nodes lie on the discrete boundary.
  const std::vector<int>& boundary_dofs() const { return boundary_dofs_; }

  int n_edges() const { return n_edges_; }

  /// Nodal interpolant of an analytic function (evaluated at the images of
  /// the Lagrange nodes under the geometric map).
  std::vector<double> interpolate(const std::function<double(const Vec3&)>& f) const;

  struct FuncEval {
    double value;
    Vec3 ref_grad;
    Vec3 phys_grad; // tangential gradient on surface meshes
  };

  /// Value and gradients of a coefficient vector at a reference point of a
  /// cell. The physical gradient uses the Jacobian inverse transpose on
  /// planar cells and the Moore-Penrose pseudo-inverse on surface cells.
  FuncEval eval(const std::vector<double>& coeffs, int cell, const Vec3& xref) const;

private:
  std::shared_ptr<const CurvedMesh> mesh_;
  int k_;
  LagrangeBasis basis_;
  int n_dofs_ = 0;
  int n_edges_ = 0;
  std::vector<int> dof_map_;
  std::vector<int> boundary_dofs_;
};

} // namespace cfem
