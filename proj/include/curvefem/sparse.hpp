#pragma once

#include <cstdint>
#include <vector>

namespace cfem {

/// Row-compressed sparse matrix with int32 indices; columns are sorted
/// within each row.
struct CsrMatrix {
  std::int32_t n = 0;
  std::vector<std::int32_t> row_ptr;
  std::vector<std::int32_t> col_idx;
  std::vector<double> values;

  /// Reference to an existing entry; throws if (row, col) is outside the
  /// sparsity pattern.
  double& at(std::int32_t row, std::int32_t col);
  double get(std::int32_t row, std::int32_t col) const;

  void matvec(const double* x, double* y) const;

  double max_abs() const;
  /// max_ij |a_ij - a_ji| over the pattern.
  double symmetry_gap() const;
  std::vector<double> diagonal() const;
};

struct LinearSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
};

} // namespace cfem
