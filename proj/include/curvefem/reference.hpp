#pragma once

#include <array>
#include <vector>

#include "curvefem/vecmat.hpp"

namespace cfem {

/// Barycentric tuple on the reference simplex; dim+1 leading entries used.
using Bary = std::array<double, 4>;

/// Reference simplex vertices: v0 = origin, vi = e_i. Barycentric
/// coordinates follow that vertex order.
Vec3 bary_to_ref(const Bary& lam, int dim);
Bary ref_to_bary(const Vec3& x, int dim);

/// Equispaced P^k Lagrange lattice, as barycentric tuples alpha/k.
/// Throws UnsupportedDegree for k < 1 or k > 10.
std::vector<Bary> lagrange_nodes(int dim, int k);

/// Nodal Lagrange basis of degree k on the reference simplex of dimension
/// dim. Shape functions are evaluated with the equispaced-node product
/// formula, so no Vandermonde inversion is involved.
class LagrangeBasis {
public:
  LagrangeBasis(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Bary>& nodes() const { return nodes_; }
  Vec3 node_ref(int i) const { return bary_to_ref(nodes_[i], dim_); }

  /// Values of all shape functions at a reference point.
  void eval(const Vec3& x, double* values) const;
  /// Gradients (w.r.t. reference coordinates) of all shape functions.
  void eval_grad(const Vec3& x, Vec3* grads) const;

  std::vector<double> eval(const Vec3& x) const;
  std::vector<Vec3> eval_grad(const Vec3& x) const;

private:
  int dim_;
  int degree_;
  std::vector<Bary> nodes_; // barycentric multi-indices / k
  std::vector<std::array<int, 4>> multi_; // integer multi-indices
};

/// Quadrature rule on the reference simplex: exact for all polynomials of
/// total degree <= order, weights sum to 1/dim!.
struct QuadratureRule {
  int dim = 0;
  int order = 0;
  std::vector<Bary> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
  Vec3 point_ref(int q) const { return bary_to_ref(points[q], dim); }
};

/// Gauss-Legendre x Gauss-Jacobi collapsed (Duffy) rules. Throws
/// UnsupportedOrder for order > 20 or order < 0.
QuadratureRule quadrature(int dim, int order);

/// Gauss nodes/weights on [0,1] for the weight (1-t)^alpha, alpha in {0,1,2}
/// (alpha = 0 is plain Gauss-Legendre). Exposed for the 1D oracles.
void gauss_jacobi_01(int n, int alpha, std::vector<double>& nodes, std::vector<double>& weights);

/// Shape-function values/gradients tabulated at a fixed point set.
/// values[q*n_func + i], grads[q*n_func + i].
struct BasisTable {
  int n_points = 0;
  int n_func = 0;
  std::vector<double> values;
  std::vector<Vec3> grads;

  double value(int q, int i) const { return values[static_cast<std::size_t>(q) * n_func + i]; }
  const Vec3& grad(int q, int i) const { return grads[static_cast<std::size_t>(q) * n_func + i]; }
};

BasisTable tabulate(const LagrangeBasis& basis, const std::vector<Bary>& points);

} // namespace cfem
