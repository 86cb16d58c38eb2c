#include "curvefem/reference.hpp"

#include <algorithm>
#include <cmath>

#include "curvefem/errors.hpp"

namespace cfem {

Vec3 bary_to_ref(const Bary& lam, int dim) {
  Vec3 x{0, 0, 0};
  for (int j = 0; j < dim; ++j) x[j] = lam[j + 1];
  return x;
}

Bary ref_to_bary(const Vec3& x, int dim) {
  Bary lam{0, 0, 0, 0};
  double s = 0.0;
  for (int j = 0; j < dim; ++j) {
    lam[j + 1] = x[j];
    s += x[j];
  }
  lam[0] = 1.0 - s;
  return lam;
}

namespace {

void check_degree(int dim, int k) {
  if (dim < 1 || dim > 3) throw UnsupportedDegree("reference dimension must be 1, 2 or 3");
  if (k < 1 || k > 10) throw UnsupportedDegree("Lagrange degree must be in [1, 10]");
}

std::vector<std::array<int, 4>> lattice_multi_indices(int dim, int k) {
  std::vector<std::array<int, 4>> multi;
  if (dim == 1) {
    for (int i = 0; i <= k; ++i) multi.push_back({k - i, i, 0, 0});
  } else if (dim == 2) {
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k - i; ++j) multi.push_back({k - i - j, i, j, 0});
  } else {
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k - i; ++j)
        for (int l = 0; l <= k - i - j; ++l) multi.push_back({k - i - j - l, i, j, l});
  }
  return multi;
}

/// P_m(t) = prod_{j<m} (k t - j)/(m - j) and its derivative. P_0 = 1.
void eval_univariate(int k, int m, double t, double& p, double& dp) {
  p = 1.0;
  dp = 0.0;
  for (int j = 0; j < m; ++j) {
    const double c = 1.0 / (m - j);
    const double f = (k * t - j) * c;
    dp = dp * f + p * k * c;
    p *= f;
  }
}

// --- Gauss rules via Golub-Welsch -----------------------------------------

/// Eigenvalues and eigenvectors of a symmetric tridiagonal matrix by the
/// implicit QL algorithm with Wilkinson shifts. diag/offdiag are destroyed;
/// z must come in as the identity and leaves as the eigenvector columns.
void tridiag_eigen(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, int n) {
  const double eps = 2.22e-16;
  e.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    for (;;) {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter++ == 60) throw NonConvergence("tridiagonal eigen iteration failed");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        for (int row = 0; row < n; ++row) {
          f = z[row * n + i + 1];
          z[row * n + i + 1] = s * z[row * n + i] + c * f;
          z[row * n + i] = c * z[row * n + i] - s * f;
        }
      }
      if (r == 0.0 && m - 1 >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

/// Gauss rule on [-1,1] for the Jacobi weight (1-x)^alpha (beta = 0).
void gauss_jacobi_m11(int n, int alpha, std::vector<double>& nodes,
                      std::vector<double>& weights) {
  const double a = alpha;
  std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
  diag[0] = -a / (a + 2.0);
  for (int k = 1; k < n; ++k)
    diag[k] = -a * a / ((2.0 * k + a) * (2.0 * k + a + 2.0));
  for (int k = 1; k < n; ++k) {
    const double bk = 4.0 * k * k * (k + a) * (k + a) /
                      ((2.0 * k + a) * (2.0 * k + a) * (2.0 * k + a + 1.0) * (2.0 * k + a - 1.0));
    off[k - 1] = std::sqrt(bk);
  }
  std::vector<double> z(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i) * n + i] = 1.0;
  tridiag_eigen(diag, off, z, n);

  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](int i, int j) { return diag[i] < diag[j]; });

  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const int j = perm[i];
    nodes[i] = diag[j];
    const double v0 = z[0 * n + j];
    weights[i] = mu0 * v0 * v0;
  }
}

} // namespace

void gauss_jacobi_01(int n, int alpha, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw UnsupportedOrder("gauss rule needs at least one point");
  if (alpha < 0 || alpha > 2) throw UnsupportedOrder("jacobi weight exponent must be 0, 1 or 2");
  gauss_jacobi_m11(n, alpha, nodes, weights);
  // map [-1,1] with weight (1-x)^a onto [0,1] with weight (1-t)^a
  const double scale = std::pow(2.0, alpha + 1.0);
  for (int i = 0; i < n; ++i) {
    nodes[i] = 0.5 * (1.0 + nodes[i]);
    weights[i] /= scale;
  }
}

std::vector<Bary> lagrange_nodes(int dim, int k) {
  check_degree(dim, k);
  std::vector<Bary> nodes;
  for (const auto& m : lattice_multi_indices(dim, k)) {
    Bary lam{0, 0, 0, 0};
    for (int i = 0; i <= dim; ++i) lam[i] = static_cast<double>(m[i]) / k;
    nodes.push_back(lam);
  }
  return nodes;
}

LagrangeBasis::LagrangeBasis(int dim, int degree) : dim_(dim), degree_(degree) {
  check_degree(dim, degree);
  multi_ = lattice_multi_indices(dim, degree);
  nodes_ = lagrange_nodes(dim, degree);
}

void LagrangeBasis::eval(const Vec3& x, double* values) const {
  const Bary lam = ref_to_bary(x, dim_);
  for (std::size_t a = 0; a < multi_.size(); ++a) {
    double v = 1.0;
    for (int i = 0; i <= dim_; ++i) {
      double p, dp;
      eval_univariate(degree_, multi_[a][i], lam[i], p, dp);
      v *= p;
    }
    values[a] = v;
  }
}

void LagrangeBasis::eval_grad(const Vec3& x, Vec3* grads) const {
  const Bary lam = ref_to_bary(x, dim_);
  for (std::size_t a = 0; a < multi_.size(); ++a) {
    double p[4], dp[4];
    for (int i = 0; i <= dim_; ++i) eval_univariate(degree_, multi_[a][i], lam[i], p[i], dp[i]);
    // t[i] = dp_i * prod_{l != i} p_l via prefix/suffix products
    double pre[5], suf[5];
    pre[0] = 1.0;
    for (int i = 0; i <= dim_; ++i) pre[i + 1] = pre[i] * p[i];
    suf[dim_ + 1] = 1.0;
    for (int i = dim_; i >= 0; --i) suf[i] = suf[i + 1] * p[i];
    double t[4];
    for (int i = 0; i <= dim_; ++i) t[i] = dp[i] * pre[i] * suf[i + 1];
    // d lam_0 / d x_j = -1, d lam_{j+1} / d x_j = 1
    Vec3 g{0, 0, 0};
    for (int j = 0; j < dim_; ++j) g[j] = t[j + 1] - t[0];
    grads[a] = g;
  }
}

std::vector<double> LagrangeBasis::eval(const Vec3& x) const {
  std::vector<double> v(multi_.size());
  eval(x, v.data());
  return v;
}

std::vector<Vec3> LagrangeBasis::eval_grad(const Vec3& x) const {
  std::vector<Vec3> g(multi_.size());
  eval_grad(x, g.data());
  return g;
}

QuadratureRule quadrature(int dim, int order) {
  if (dim < 1 || dim > 3) throw UnsupportedOrder("quadrature dimension must be 1, 2 or 3");
  if (order < 0 || order > 20) throw UnsupportedOrder("quadrature order must be in [0, 20]");
  const int n = order / 2 + 1; // exact through 2n-1 >= order

  std::vector<double> ga, wa, gb, wb, gc, wc;
  gauss_jacobi_01(n, 0, ga, wa);

  QuadratureRule rule;
  rule.dim = dim;
  rule.order = order;
  if (dim == 1) {
    for (int i = 0; i < n; ++i) {
      rule.points.push_back({1.0 - ga[i], ga[i], 0, 0});
      rule.weights.push_back(wa[i]);
    }
    return rule;
  }
  gauss_jacobi_01(n, 1, gb, wb);
  if (dim == 2) {
    // collapsed square -> triangle: x = a(1-b), y = b, jacobian (1-b)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double x = ga[i] * (1.0 - gb[j]);
        const double y = gb[j];
        rule.points.push_back({1.0 - x - y, x, y, 0});
        rule.weights.push_back(wa[i] * wb[j]);
      }
    return rule;
  }
  gauss_jacobi_01(n, 2, gc, wc);
  // collapsed cube -> tetrahedron: x = a(1-b)(1-c), y = b(1-c), z = c
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double z = gc[l];
        const double y = gb[j] * (1.0 - z);
        const double x = ga[i] * (1.0 - gb[j]) * (1.0 - z);
        rule.points.push_back({1.0 - x - y - z, x, y, z});
        rule.weights.push_back(wa[i] * wb[j] * wc[l]);
      }
  return rule;
}

BasisTable tabulate(const LagrangeBasis& basis, const std::vector<Bary>& points) {
  BasisTable table;
  table.n_points = static_cast<int>(points.size());
  table.n_func = basis.size();
  table.values.resize(points.size() * basis.size());
  table.grads.resize(points.size() * basis.size());
  for (std::size_t q = 0; q < points.size(); ++q) {
    const Vec3 x = bary_to_ref(points[q], basis.dim());
    basis.eval(x, table.values.data() + q * basis.size());
    basis.eval_grad(x, table.grads.data() + q * basis.size());
  }
  return table;
}

} // namespace cfem
