#include "curvefem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvefem/errors.hpp"

namespace cfem {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void ImplicitDomain::require_tubular(const Vec3& x) const {
  if (std::abs(signed_distance(x)) >= tubular_radius())
    throw OutsideTubularNeighborhood(name() + ": point outside the tubular neighborhood");
}

Vec3 ImplicitDomain::project(const Vec3& x) const {
  require_tubular(x);
  const double d = signed_distance(x);
  return x - d * grad_distance(x);
}

Mat3 ImplicitDomain::projection_jacobian(const Vec3& x) const {
  require_tubular(x);
  const double d = signed_distance(x);
  const Vec3 g = grad_distance(x);
  return Mat3::identity(dim()) - outer(g, g, dim(), dim()) - d * hess_distance(x);
}

namespace {

/// d(x) = |x| - 1 in dimension dim (2: disk, 3: ball/sphere).
class RadialDomain : public ImplicitDomain {
public:
  RadialDomain(int dim, std::string name, double volume, double boundary)
      : dim_(dim), name_(std::move(name)), volume_(volume), boundary_(boundary) {}

  std::string name() const override { return name_; }
  int dim() const override { return dim_; }
  double tubular_radius() const override { return 0.9; }
  double exact_volume() const override { return volume_; }
  double exact_boundary_measure() const override { return boundary_; }

  double signed_distance(const Vec3& x) const override { return norm(x) - 1.0; }

  Vec3 grad_distance(const Vec3& x) const override {
    const double r = norm(x);
    return (1.0 / r) * x;
  }

  Mat3 hess_distance(const Vec3& x) const override {
    const double r = norm(x);
    const Vec3 u = (1.0 / r) * x;
    return (1.0 / r) * (Mat3::identity(dim_) - outer(u, u, dim_, dim_));
  }

private:
  int dim_;
  std::string name_;
  double volume_;
  double boundary_;
};

class FlowerDomain : public ImplicitDomain {
public:
  FlowerDomain(double a, int m) : a_(a), m_(m) {}

  std::string name() const override { return "flower"; }
  int dim() const override { return 2; }
  double tubular_radius() const override { return 0.3; }
  double exact_volume() const override { return kPi * (1.0 + 0.5 * a_ * a_); }
  double exact_boundary_measure() const override {
    return std::numeric_limits<double>::quiet_NaN();
  }

  double signed_distance(const Vec3& x) const override {
    const double theta = closest_theta(x);
    const double dist = norm(x - curve(theta));
    return inside(x) ? -dist : dist;
  }

  Vec3 grad_distance(const Vec3& x) const override { return outward_normal(closest_theta(x)); }

  /// Hess d = kappa/(1 + d kappa) tau tau^T with the curvature at the
  /// closest point (tau the unit tangent there).
  Mat3 hess_distance(const Vec3& x) const override {
    const double t = closest_theta(x);
    const Vec3 tan = tangent(t);
    const Vec3 tau = (1.0 / norm(tan)) * tan;
    const double kappa = curvature(t);
    const Vec3 diff = x - curve(t);
    const double d = inside(x) ? -norm(diff) : norm(diff);
    return (kappa / (1.0 + d * kappa)) * outer(tau, tau, 2, 2);
  }

  Vec3 project(const Vec3& x) const override {
    require_tubular(x);
    return curve(closest_theta(x));
  }

private:
  double radius(double t) const { return 1.0 + a_ * std::sin(m_ * t); }
  double radius_d(double t) const { return a_ * m_ * std::cos(m_ * t); }
  double radius_dd(double t) const { return -a_ * m_ * m_ * std::sin(m_ * t); }

  Vec3 curve(double t) const {
    const double r = radius(t);
    return {r * std::cos(t), r * std::sin(t), 0.0};
  }

  Vec3 tangent(double t) const {
    const double r = radius(t), dr = radius_d(t);
    const double c = std::cos(t), s = std::sin(t);
    return {dr * c - r * s, dr * s + r * c, 0.0};
  }

  Vec3 curve_dd(double t) const {
    const double r = radius(t), dr = radius_d(t), ddr = radius_dd(t);
    const double c = std::cos(t), s = std::sin(t);
    return {ddr * c - 2.0 * dr * s - r * c, ddr * s + 2.0 * dr * c - r * s, 0.0};
  }

  Vec3 outward_normal(double t) const {
    const Vec3 tan = tangent(t);
    const double len = norm(tan);
    return {tan[1] / len, -tan[0] / len, 0.0};
  }

  /// Signed curvature of the polar curve, positive where the boundary is
  /// convex (circle: +1).
  double curvature(double t) const {
    const double r = radius(t), dr = radius_d(t), ddr = radius_dd(t);
    const double denom = std::pow(r * r + dr * dr, 1.5);
    return (r * r + 2.0 * dr * dr - r * ddr) / denom;
  }

  bool inside(const Vec3& x) const {
    const double phi = std::atan2(x[1], x[0]);
    return norm(x) < radius(phi);
  }

  double sq_dist(const Vec3& x, double t) const {
    const Vec3 diff = x - curve(t);
    return dot(diff, diff);
  }

  bool stationary(const Vec3& x, double t) const {
    const Vec3 diff = x - curve(t);
    return std::abs(dot(diff, tangent(t))) <= 1e-12 * (1.0 + dot(diff, diff));
  }

  /// Newton on the stationarity condition (x - c(t)) . c'(t) = 0, with a
  /// step clamp. Returns true when the residual closed to rounding level.
  bool newton_polish(const Vec3& x, double& t) const {
    for (int it = 0; it < 50; ++it) {
      const Vec3 diff = x - curve(t);
      const Vec3 tan = tangent(t);
      const double f = -2.0 * dot(diff, tan);
      const double df = -2.0 * dot(diff, curve_dd(t)) + 2.0 * dot(tan, tan);
      if (df <= 1e-14) return false;
      double step = f / df;
      step = std::clamp(step, -0.3, 0.3);
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    return stationary(x, t);
  }

  double closest_theta(const Vec3& x) const {
    // candidate seeds: the angular coordinate and the best of a coarse scan
    const int n_scan = 72;
    double scan_t = 0.0, scan_val = std::numeric_limits<double>::max();
    for (int i = 0; i < n_scan; ++i) {
      const double t = 2.0 * kPi * i / n_scan;
      const double v = sq_dist(x, t);
      if (v < scan_val) {
        scan_val = v;
        scan_t = t;
      }
    }
    double best_t = 0.0, best = std::numeric_limits<double>::max();
    bool found = false;
    for (double seed : {std::atan2(x[1], x[0]), scan_t}) {
      double t = seed;
      if (newton_polish(x, t)) {
        const double v = sq_dist(x, t);
        if (v < best) {
          best = v;
          best_t = t;
          found = true;
        }
      }
    }
    if (found && best <= scan_val + 1e-13) return best_t;
    // ternary-search fallback on the scan bracket
    double lo = scan_t - 2.0 * kPi / n_scan, hi = scan_t + 2.0 * kPi / n_scan;
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (sq_dist(x, m1) < sq_dist(x, m2))
        hi = m2;
      else
        lo = m1;
    }
    double t = 0.5 * (lo + hi);
    newton_polish(x, t);
    if (!stationary(x, t)) throw NonConvergence("flower: closest-point search failed");
    if (found && best < sq_dist(x, t)) return best_t;
    return t;
  }

  double a_;
  int m_;
};

} // namespace

DomainPtr unit_disk() {
  return std::make_shared<RadialDomain>(2, "unit_disk", kPi, 2.0 * kPi);
}

DomainPtr unit_sphere_surface() {
  return std::make_shared<RadialDomain>(3, "unit_sphere", 4.0 * kPi / 3.0, 4.0 * kPi);
}

DomainPtr flower(double a, int m) { return std::make_shared<FlowerDomain>(a, m); }

} // namespace cfem
