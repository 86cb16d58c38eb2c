#pragma once

#include <utility>
#include <vector>

#include "curvefem/sparse.hpp"

namespace cfem {

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  /// Preconditioned residual norms, one entry per iteration (including the
  /// initial residual).
  std::vector<double> residual_history;
};

/// Conjugate gradients with Jacobi (diagonal) preconditioning, zero initial
/// guess. Stops when ||b - A x||_2 <= rel_tol ||b||_2. max_iter < 0 selects
/// the default 20 n. Throws MaxIterations on non-convergence and
/// IndefiniteBreakdown when a non-SPD direction shows up.
std::pair<std::vector<double>, SolveReport> solve_cg(const CsrMatrix& a,
                                                     const std::vector<double>& b,
                                                     double rel_tol = 1e-12, int max_iter = -1);

} // namespace cfem
