#pragma once

#include <functional>

#include "curvefem/mesh.hpp"

namespace cfem {

/// Volume lift choice. Modified: the map that agrees with the orthogonal
/// projection on the whole discrete boundary (the curved element is carried
/// directly onto the exact one). Elliott: the classical construction that
/// routes through the affine element and breaks that trace property on
/// curved boundary cells.
enum class LiftVariant { Modified, Elliott };

const char* to_string(LiftVariant v);
LiftVariant lift_variant_from_string(const std::string& s);

struct LiftEval {
  Vec3 point;    // G(x), a point in the physical domain
  Mat3 jacobian; // DG at x = F^(r)(xref), ambient x ambient
  double jdet;   // det DG (J_G)
};

/// Per-cell change of variables from the computational domain onto the
/// physical one. Immutable; evaluations are pure functions of (cell, xref).
class LiftMap {
public:
  LiftMap(std::shared_ptr<const CurvedMesh> mesh, LiftVariant variant);

  const CurvedMesh& mesh() const { return *mesh_; }
  LiftVariant variant() const { return variant_; }

  /// G(F^(r)(xref)). Identity (composed with the geometric map) on internal
  /// cells and on meshes without a domain; the closest-point projection on
  /// surface meshes.
  Vec3 lift_point(int cell, const Vec3& xref) const;

  /// Value, Jacobian matrix and Jacobian determinant of the volume lift.
  /// Planar meshes only. Throws DegenerateLift when det <= 0.
  LiftEval lift_jacobian(int cell, const Vec3& xref) const;

  /// Surface Jacobian J_b of the projection restricted to a curved boundary
  /// edge, at edge parameter t in [0,1].
  double surface_jacobian_face(int cell, int local_edge, double t) const;

  /// Surface Jacobian J_b on a surface-mesh cell.
  double surface_jacobian_cell(int cell, const Vec3& xref) const;

  /// Reference coordinates of a physical point inside a (possibly curved)
  /// cell, by Newton iteration seeded from the affine parent.
  /// Throws NewtonDivergence / OutsideElement.
  Vec3 inverse_ref_coords(int cell, const Vec3& x) const;

private:
  std::shared_ptr<const CurvedMesh> mesh_;
  LiftVariant variant_;
};

/// Inverse lift of a volume source term: (cell, xref) -> f(G(F^(r)(xref))).
std::function<double(int, const Vec3&)> inverse_lift_volume(
    const LiftMap& lift, std::function<double(const Vec3&)> f);

/// Inverse lift of a surface source term: x -> g(b(x)).
std::function<double(const Vec3&)> inverse_lift_surface(const ImplicitDomain& domain,
                                                        std::function<double(const Vec3&)> g);

/// Largest |lift_point - b(F^(r))| over the boundary quadrature points: zero
/// (to rounding) for the modified lift, strictly positive for the Elliott
/// lift on curved boundary cells.
double max_trace_deviation(const LiftMap& lift, int quad_order = 19);

/// Integral of J_G over the computational domain. The corrected element map
/// loses analyticity at the vertex opposite the boundary face, so boundary
/// cells are integrated with a composite rule graded toward that vertex.
double lifted_measure(const LiftMap& lift, int order = 19, int grading_depth = 12);

} // namespace cfem
