#include "curvefem/kernels.hpp"

// AVX2+FMA kernels. This translation unit is compiled with -mavx2 -mfma on
// x86-64 and must only be entered after a runtime cpuid check; on other
// targets it provides no table and the dispatcher stays on the scalar path.
//
// The SIMD variants reassociate reductions (4 partial sums), so dot products
// differ from the scalar reference by rounding only; the equivalence tests
// bound that difference.

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace cfem::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpay_avx2(const double* x, double beta, double* y, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(vb, vy, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void hadamard_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void csr_matvec_avx2(std::int32_t n_rows, const std::int32_t* row_ptr,
                     const std::int32_t* col_idx, const double* values, const double* x,
                     double* y) {
  for (std::int32_t row = 0; row < n_rows; ++row) {
    const std::int32_t begin = row_ptr[row];
    const std::int32_t end = row_ptr[row + 1];
    __m256d acc = _mm256_setzero_pd();
    std::int32_t p = begin;
    for (; p + 4 <= end; p += 4) {
      __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col_idx + p));
      __m256d vx = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(values + p), vx, acc);
    }
    double s = hsum(acc);
    for (; p < end; ++p) s += values[p] * x[col_idx[p]];
    y[row] = s;
  }
}

const KernelTable table = {
    "avx2", dot_avx2, axpy_avx2, xpay_avx2, hadamard_avx2, csr_matvec_avx2,
};

} // namespace

const KernelTable* avx2_table() { return &table; }

} // namespace cfem::kernels

#else

namespace cfem::kernels {
const KernelTable* avx2_table() { return nullptr; }
} // namespace cfem::kernels

#endif
