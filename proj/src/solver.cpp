#include "curvefem/solver.hpp"

#include <algorithm>
#include <cmath>

#include "curvefem/errors.hpp"
#include "curvefem/kernels.hpp"

namespace cfem {

double& CsrMatrix::at(std::int32_t row, std::int32_t col) {
  const auto begin = col_idx.begin() + row_ptr[row];
  const auto end = col_idx.begin() + row_ptr[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) throw Error("entry outside sparsity pattern");
  return values[static_cast<std::size_t>(it - col_idx.begin())];
}

double CsrMatrix::get(std::int32_t row, std::int32_t col) const {
  const auto begin = col_idx.begin() + row_ptr[row];
  const auto end = col_idx.begin() + row_ptr[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return 0.0;
  return values[static_cast<std::size_t>(it - col_idx.begin())];
}

void CsrMatrix::matvec(const double* x, double* y) const {
  kernels::csr_matvec(n, row_ptr.data(), col_idx.data(), values.data(), x, y);
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::symmetry_gap() const {
  double gap = 0.0;
  for (std::int32_t row = 0; row < n; ++row)
    for (std::int32_t p = row_ptr[row]; p < row_ptr[row + 1]; ++p)
      gap = std::max(gap, std::abs(values[p] - get(col_idx[p], row)));
  return gap;
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(n);
  for (std::int32_t i = 0; i < n; ++i) d[i] = get(i, i);
  return d;
}

// Jacobi-preconditioned conjugate residual iteration. Within the CG family
// this is the variant that minimizes the preconditioned residual norm over
// the Krylov space, so that norm is non-increasing by construction (plain
// CG residual norms oscillate). One matvec per iteration.
std::pair<std::vector<double>, SolveReport> solve_cg(const CsrMatrix& a,
                                                     const std::vector<double>& b, double rel_tol,
                                                     int max_iter) {
  const std::size_t n = b.size();
  if (max_iter < 0) max_iter = 20 * static_cast<int>(n);

  std::vector<double> x(n, 0.0), r = b, z(n), p(n), w(n), az(n), mw(n);
  std::vector<double> inv_diag = a.diagonal();
  for (double& d : inv_diag) d = (d != 0.0) ? 1.0 / d : 1.0;

  SolveReport report;
  const double bnorm = kernels::norm2(b.data(), n);
  if (bnorm == 0.0) {
    report.converged = true;
    return {x, report};
  }

  kernels::hadamard(inv_diag.data(), r.data(), z.data(), n);
  report.residual_history.push_back(
      std::sqrt(std::max(kernels::dot(r.data(), z.data(), n), 0.0)));
  p = z;
  a.matvec(z.data(), az.data());
  w = az; // w = A p
  double zaz = kernels::dot(z.data(), az.data(), n);

  for (int it = 0; it < max_iter; ++it) {
    if (zaz <= 0.0) throw IndefiniteBreakdown("cg: non-positive curvature direction");
    kernels::hadamard(inv_diag.data(), w.data(), mw.data(), n);
    const double wmw = kernels::dot(w.data(), mw.data(), n);
    if (wmw <= 0.0) throw IndefiniteBreakdown("cg: breakdown in the search direction");
    const double alpha = zaz / wmw;
    kernels::axpy(alpha, p.data(), x.data(), n);
    kernels::axpy(-alpha, w.data(), r.data(), n);
    report.iterations = it + 1;

    const double rnorm = kernels::norm2(r.data(), n);
    kernels::hadamard(inv_diag.data(), r.data(), z.data(), n);
    report.residual_history.push_back(
        std::sqrt(std::max(kernels::dot(r.data(), z.data(), n), 0.0)));
    if (rnorm <= rel_tol * bnorm) {
      report.converged = true;
      report.relative_residual = rnorm / bnorm;
      return {x, report};
    }
    a.matvec(z.data(), az.data());
    const double zaz_next = kernels::dot(z.data(), az.data(), n);
    const double beta = zaz_next / zaz;
    zaz = zaz_next;
    kernels::xpay(z.data(), beta, p.data(), n);
    kernels::xpay(az.data(), beta, w.data(), n);
  }
  throw MaxIterations("cg: no convergence within the iteration budget");
}

} // namespace cfem
