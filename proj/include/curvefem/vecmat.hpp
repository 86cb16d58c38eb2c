#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "curvefem/errors.hpp"

namespace cfem {

/// Point / vector with fixed capacity 3. Two-dimensional data keeps z = 0 so
/// that dot products and norms work unchanged in either ambient dimension.
using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) {
  a[0] += b[0];
  a[1] += b[1];
  a[2] += b[2];
  return a;
}
inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Dense matrix with capacity 3x3; the used block is (rows x cols) and is
/// tracked by the caller. Entries outside the used block stay zero.
struct Mat3 {
  double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

  double& operator()(int i, int j) { return m[i][j]; }
  double operator()(int i, int j) const { return m[i][j]; }

  static Mat3 identity(int n) {
    Mat3 a;
    for (int i = 0; i < n; ++i) a.m[i][i] = 1.0;
    return a;
  }
};

inline Mat3 operator+(const Mat3& a, const Mat3& b) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = a.m[i][j] + b.m[i][j];
  return c;
}
inline Mat3 operator-(const Mat3& a, const Mat3& b) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = a.m[i][j] - b.m[i][j];
  return c;
}
inline Mat3 operator*(double s, const Mat3& a) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = s * a.m[i][j];
  return c;
}

/// c = a(rows x inner) * b(inner x cols)
inline Mat3 matmul(const Mat3& a, const Mat3& b, int rows, int inner, int cols) {
  Mat3 c;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      double s = 0.0;
      for (int l = 0; l < inner; ++l) s += a.m[i][l] * b.m[l][j];
      c.m[i][j] = s;
    }
  return c;
}

inline Vec3 matvec(const Mat3& a, const Vec3& x, int rows, int cols) {
  Vec3 y{0, 0, 0};
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols; ++j) s += a.m[i][j] * x[j];
    y[i] = s;
  }
  return y;
}

/// y = a^T x, with a of size (rows x cols); result has cols entries.
inline Vec3 matTvec(const Mat3& a, const Vec3& x, int rows, int cols) {
  Vec3 y{0, 0, 0};
  for (int j = 0; j < cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += a.m[i][j] * x[i];
    y[j] = s;
  }
  return y;
}

inline Mat3 transpose(const Mat3& a, int rows, int cols) {
  Mat3 t;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t.m[j][i] = a.m[i][j];
  return t;
}

inline Mat3 outer(const Vec3& a, const Vec3& b, int rows, int cols) {
  Mat3 c;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) c.m[i][j] = a[i] * b[j];
  return c;
}

inline double det(const Mat3& a, int n) {
  if (n == 1) return a.m[0][0];
  if (n == 2) return a.m[0][0] * a.m[1][1] - a.m[0][1] * a.m[1][0];
  return a.m[0][0] * (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) -
         a.m[0][1] * (a.m[1][0] * a.m[2][2] - a.m[1][2] * a.m[2][0]) +
         a.m[0][2] * (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]);
}

inline Mat3 inverse(const Mat3& a, int n) {
  const double d = det(a, n);
  if (d == 0.0) throw DegenerateElement("singular matrix in inverse()");
  Mat3 inv;
  if (n == 1) {
    inv.m[0][0] = 1.0 / d;
  } else if (n == 2) {
    inv.m[0][0] = a.m[1][1] / d;
    inv.m[0][1] = -a.m[0][1] / d;
    inv.m[1][0] = -a.m[1][0] / d;
    inv.m[1][1] = a.m[0][0] / d;
  } else {
    inv.m[0][0] = (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) / d;
    inv.m[0][1] = (a.m[0][2] * a.m[2][1] - a.m[0][1] * a.m[2][2]) / d;
    inv.m[0][2] = (a.m[0][1] * a.m[1][2] - a.m[0][2] * a.m[1][1]) / d;
    inv.m[1][0] = (a.m[1][2] * a.m[2][0] - a.m[1][0] * a.m[2][2]) / d;
    inv.m[1][1] = (a.m[0][0] * a.m[2][2] - a.m[0][2] * a.m[2][0]) / d;
    inv.m[1][2] = (a.m[0][2] * a.m[1][0] - a.m[0][0] * a.m[1][2]) / d;
    inv.m[2][0] = (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]) / d;
    inv.m[2][1] = (a.m[0][1] * a.m[2][0] - a.m[0][0] * a.m[2][1]) / d;
    inv.m[2][2] = (a.m[0][0] * a.m[1][1] - a.m[0][1] * a.m[1][0]) / d;
  }
  return inv;
}

/// Gram matrix a^T a of an (rows x cols) matrix; result is cols x cols.
inline Mat3 gram(const Mat3& a, int rows, int cols) {
  Mat3 g;
  for (int i = 0; i < cols; ++i)
    for (int j = 0; j < cols; ++j) {
      double s = 0.0;
      for (int l = 0; l < rows; ++l) s += a.m[l][i] * a.m[l][j];
      g.m[i][j] = s;
    }
  return g;
}

inline double frobenius_norm(const Mat3& a, int rows, int cols) {
  double s = 0.0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) s += a.m[i][j] * a.m[i][j];
  return std::sqrt(s);
}

} // namespace cfem
