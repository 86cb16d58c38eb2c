#pragma once

#include <memory>
#include <string>

#include "curvefem/vecmat.hpp"

namespace cfem {

/// A smooth domain given implicitly through its signed distance function.
/// Sign convention: d < 0 inside, d = 0 on the boundary, d > 0 outside.
/// grad/hess/project are only guaranteed inside the tubular neighborhood
/// |d(x)| < tubular_radius(), where the closest point is unique.
class ImplicitDomain {
public:
  virtual ~ImplicitDomain() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;

  virtual double signed_distance(const Vec3& x) const = 0;
  /// Unit normal extension (gradient of the signed distance).
  virtual Vec3 grad_distance(const Vec3& x) const = 0;
  virtual Mat3 hess_distance(const Vec3& x) const = 0;

  virtual double tubular_radius() const = 0;

  /// Analytic measure of the enclosed domain (area in 2D, volume in 3D);
  /// NaN when not available.
  virtual double exact_volume() const = 0;
  /// Analytic measure of the boundary; NaN when not available.
  virtual double exact_boundary_measure() const = 0;

  /// Closest-point projection b(x) = x - d(x) grad d(x).
  /// Throws OutsideTubularNeighborhood when |d(x)| >= tubular_radius().
  virtual Vec3 project(const Vec3& x) const;

  /// Differential of the projection, Db = I - grad d grad d^T - d Hess d.
  virtual Mat3 projection_jacobian(const Vec3& x) const;

protected:
  void require_tubular(const Vec3& x) const;
};

using DomainPtr = std::shared_ptr<const ImplicitDomain>;

DomainPtr unit_disk();
DomainPtr unit_sphere_surface();

/// Star-shaped domain with polar boundary r(theta) = 1 + a sin(m theta).
/// The signed distance is computed numerically (Newton on the closest-point
/// condition, seeded from the angular coordinate and safeguarded by a
/// coarse angular scan).
DomainPtr flower(double a = 0.3, int m = 3);

} // namespace cfem
