#include "curvefem/kernels.hpp"

// Reference kernels. Plain loops, no explicit vectorization; these define
// the semantics the SIMD variants are tested against.

namespace cfem::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpay_scalar(const double* x, double beta, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void hadamard_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void csr_matvec_scalar(std::int32_t n_rows, const std::int32_t* row_ptr,
                       const std::int32_t* col_idx, const double* values, const double* x,
                       double* y) {
  for (std::int32_t row = 0; row < n_rows; ++row) {
    double s = 0.0;
    for (std::int32_t p = row_ptr[row]; p < row_ptr[row + 1]; ++p) s += values[p] * x[col_idx[p]];
    y[row] = s;
  }
}

const KernelTable table = {
    "scalar", dot_scalar, axpy_scalar, xpay_scalar, hadamard_scalar, csr_matvec_scalar,
};

} // namespace

const KernelTable* scalar_table() { return &table; }

} // namespace cfem::kernels
