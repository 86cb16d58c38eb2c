#include "curvefem/fespace.hpp"

#include <algorithm>
#include <cmath>

#include "curvefem/errors.hpp"

namespace cfem {

FESpace::FESpace(std::shared_ptr<const CurvedMesh> mesh, int k)
    : mesh_(std::move(mesh)), k_(k), basis_(2, k) {
  const AffineMesh& affine = mesh_->affine();
  const auto topo = build_edges(affine);
  n_edges_ = static_cast<int>(topo.edges.size());

  const int per_edge = k_ - 1;
  const int per_cell = (k_ - 1) * (k_ - 2) / 2;
  const int vertex_base = 0;
  const int edge_base = affine.n_vertices();
  const int cell_base = edge_base + n_edges_ * per_edge;
  n_dofs_ = cell_base + affine.n_cells() * per_cell;

  // integer multi-indices of the local lattice
  const int n_local = basis_.size();
  std::vector<std::array<int, 3>> multi(n_local);
  for (int i = 0; i < n_local; ++i)
    for (int c = 0; c < 3; ++c)
      multi[i][c] = static_cast<int>(std::lround(basis_.nodes()[i][c] * k_));

  dof_map_.assign(static_cast<std::size_t>(affine.n_cells()) * n_local, -1);
  for (int c = 0; c < affine.n_cells(); ++c) {
    int interior_seen = 0;
    for (int i = 0; i < n_local; ++i) {
      const auto& m = multi[i];
      int dof = -1;
      int zero = -1, nz = 0;
      for (int v = 0; v < 3; ++v) {
        if (m[v] == k_) dof = vertex_base + affine.cells[c][v];
        if (m[v] == 0)
          zero = v;
        else
          ++nz;
      }
      if (dof < 0 && nz == 2) {
        // edge node on the edge opposite `zero`
        const int a = (zero + 1) % 3, b = (zero + 2) % 3;
        const int ga = affine.cells[c][a], gb = affine.cells[c][b];
        const int edge = topo.cell_edges[c][zero];
        // slot counted from the smaller global vertex index
        const int along_b = m[b]; // weight on local vertex b, in [1, k-1]
        const int slot = (ga < gb) ? along_b - 1 : (k_ - along_b) - 1;
        dof = edge_base + edge * per_edge + slot;
      } else if (dof < 0) {
        dof = cell_base + c * per_cell + interior_seen++;
      }
      dof_map_[static_cast<std::size_t>(c) * n_local + i] = dof;
    }
  }

  // boundary DOFs: nodes on boundary faces (every node on surface meshes)
  std::vector<std::uint8_t> on_boundary(n_dofs_, 0);
  if (affine.surface) {
    std::fill(on_boundary.begin(), on_boundary.end(), 1);
  } else {
    for (const auto& [c, le] : affine.boundary_faces)
      for (int i = 0; i < n_local; ++i)
        if (multi[i][le] == 0) on_boundary[global_dof(c, i)] = 1;
  }
  for (int d = 0; d < n_dofs_; ++d)
    if (on_boundary[d]) boundary_dofs_.push_back(d);
}

std::vector<double> FESpace::interpolate(const std::function<double(const Vec3&)>& f) const {
  std::vector<double> coeffs(n_dofs_, 0.0);
  for (int c = 0; c < mesh_->n_cells(); ++c)
    for (int i = 0; i < n_local(); ++i)
      coeffs[global_dof(c, i)] = f(mesh_->map_point(c, basis_.node_ref(i)));
  return coeffs;
}

FESpace::FuncEval FESpace::eval(const std::vector<double>& coeffs, int cell,
                                const Vec3& xref) const {
  const int n = n_local();
  std::vector<double> values(n);
  std::vector<Vec3> grads(n);
  basis_.eval(xref, values.data());
  basis_.eval_grad(xref, grads.data());

  FuncEval out{0.0, {0, 0, 0}, {0, 0, 0}};
  for (int i = 0; i < n; ++i) {
    const double u = coeffs[global_dof(cell, i)];
    out.value += u * values[i];
    out.ref_grad += u * grads[i];
  }
  const MapEval me = mesh_->map(cell, xref);
  if (mesh_->affine().surface) {
    const Mat3 ginv = inverse(gram(me.jacobian, 3, 2), 2);
    out.phys_grad = matvec(me.jacobian, matvec(ginv, out.ref_grad, 2, 2), 3, 2);
  } else {
    const Mat3 jinv_t = transpose(inverse(me.jacobian, 2), 2, 2);
    out.phys_grad = matvec(jinv_t, out.ref_grad, 2, 2);
  }
  return out;
}

} // namespace cfem
