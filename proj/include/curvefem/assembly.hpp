#pragma once

#include <functional>

#include "curvefem/fespace.hpp"
#include "curvefem/lift.hpp"
#include "curvefem/sparse.hpp"

namespace cfem {

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

/// Coefficients and data of the bulk problem
///   -Laplace(u) + kappa u = f            in the domain,
///   -beta Laplace_Gamma(u) + dn(u) + alpha u = g  on the boundary.
/// Sign requirements: kappa >= 0, alpha >= 0, beta >= 0 with kappa + alpha
/// > 0 so the form stays positive definite (alpha, beta > 0 is the
/// second-order boundary case; beta = 0 degenerates to a Robin problem,
/// used by the polygonal patch tests).
struct ProblemSpec {
  double kappa = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  ScalarField f;
  ScalarField g;
  ScalarField exact_u;      // optional, for error evaluation
  VectorField exact_grad_u; // optional

  void validate() const;
};

/// The disk benchmark: alpha = beta = 1, kappa = 0, exact solution y e^x.
ProblemSpec ventcel_disk_problem();

/// The sphere benchmark for -Laplace_Gamma(u) + u = g with exact solution
/// e^y restricted to the unit sphere (g carries the corresponding surface
/// source).
ProblemSpec sphere_laplace_problem();

/// Quadrature order policy: over-integrates the curved Jacobians so that
/// quadrature error stays below the discretization error.
int volume_quadrature_order(int k, int r);
int surface_quadrature_order(int k, int r);

/// Sparsity pattern of the Galerkin matrix (sorted columns per row).
CsrMatrix build_sparsity(const FESpace& space);

/// Assembles the bulk problem on a planar curved mesh. Volume terms are
/// pulled back through the geometric map; boundary terms integrate over the
/// curved boundary edges; the right-hand side carries the lift Jacobians
/// J_G and J_b. Quadrature orders below the policy throw
/// QuadratureOrderTooLow; order < 0 selects the policy value.
LinearSystem assemble_ventcel(const FESpace& space, const ProblemSpec& spec, const LiftMap& lift,
                              int volume_order = -1, int surface_order = -1);

/// Assembles -Laplace_Gamma(u) + u = g on a surface mesh (tangential
/// gradients from the parametric Jacobian pseudo-inverse, source weighted
/// by J_b).
LinearSystem assemble_surface_laplace(const FESpace& space, const ScalarField& g,
                                      int order = -1);

} // namespace cfem
