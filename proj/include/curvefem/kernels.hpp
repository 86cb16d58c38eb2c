#pragma once

#include <cstddef>
#include <cstdint>

namespace cfem::kernels {

/// Dense vector and CSR matrix-vector primitives used by the solver and the
/// study pipelines. Every operation exists as a scalar reference kernel and,
/// on x86-64 with AVX2+FMA, as a vectorized variant. The backend is picked
/// once at startup from cpuid; tests pin it explicitly to cross-check the
/// two implementations against each other.
enum class Backend { Auto, Scalar, Avx2 };

/// Select a backend. Auto re-runs cpu detection. Requesting Avx2 on a cpu
/// without AVX2/FMA support falls back to Scalar.
void set_backend(Backend b);

/// Backend currently in use (never Auto).
Backend active_backend();
const char* backend_name();

/// True if the vectorized backend can run on this machine.
bool avx2_available();

double dot(const double* a, const double* b, std::size_t n);
double norm2(const double* a, std::size_t n);

/// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

/// y = x + beta * y
void xpay(const double* x, double beta, double* y, std::size_t n);

/// out = a .* b  (used for diagonal preconditioning)
void hadamard(const double* a, const double* b, double* out, std::size_t n);

/// y = A x for a CSR matrix with int32 indices.
void csr_matvec(std::int32_t n_rows, const std::int32_t* row_ptr, const std::int32_t* col_idx,
                const double* values, const double* x, double* y);

/// Function table implemented by each backend.
struct KernelTable {
  const char* name;
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*xpay)(const double*, double, double*, std::size_t);
  void (*hadamard)(const double*, const double*, double*, std::size_t);
  void (*csr_matvec)(std::int32_t, const std::int32_t*, const std::int32_t*, const double*,
                     const double*, double*);
};

/// Backend tables; avx2_table() returns nullptr when the translation unit
/// was built without AVX2 support.
const KernelTable* scalar_table();
const KernelTable* avx2_table();

} // namespace cfem::kernels
