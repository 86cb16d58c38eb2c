#include "curvefem/kernels.hpp"

#include <cmath>

namespace cfem::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* pick(Backend b) {
  if (b == Backend::Scalar) return scalar_table();
  const KernelTable* avx2 = avx2_table();
  if (avx2 != nullptr && cpu_has_avx2()) return avx2;
  return scalar_table();
}

const KernelTable*& active_table() {
  static const KernelTable* table = pick(Backend::Auto);
  return table;
}

} // namespace

void set_backend(Backend b) { active_table() = pick(b); }

Backend active_backend() {
  return active_table() == scalar_table() ? Backend::Scalar : Backend::Avx2;
}

const char* backend_name() { return active_table()->name; }

bool avx2_available() { return avx2_table() != nullptr && cpu_has_avx2(); }

double dot(const double* a, const double* b, std::size_t n) { return active_table()->dot(a, b, n); }

double norm2(const double* a, std::size_t n) { return std::sqrt(active_table()->dot(a, a, n)); }

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active_table()->axpy(alpha, x, y, n);
}

void xpay(const double* x, double beta, double* y, std::size_t n) {
  active_table()->xpay(x, beta, y, n);
}

void hadamard(const double* a, const double* b, double* out, std::size_t n) {
  active_table()->hadamard(a, b, out, n);
}

void csr_matvec(std::int32_t n_rows, const std::int32_t* row_ptr, const std::int32_t* col_idx,
                const double* values, const double* x, double* y) {
  active_table()->csr_matvec(n_rows, row_ptr, col_idx, values, x, y);
}

} // namespace cfem::kernels
