#include "curvefem/lift.hpp"

#include <cmath>
#include <functional>

#include "curvefem/errors.hpp"

namespace cfem {

const char* to_string(LiftVariant v) {
  return v == LiftVariant::Modified ? "modified" : "elliott";
}

LiftVariant lift_variant_from_string(const std::string& s) {
  if (s == "modified") return LiftVariant::Modified;
  if (s == "elliott") return LiftVariant::Elliott;
  throw ConfigError("unknown lift variant '" + s + "' (expected modified|elliott)");
}

LiftMap::LiftMap(std::shared_ptr<const CurvedMesh> mesh, LiftVariant variant)
    : mesh_(std::move(mesh)), variant_(variant) {}

namespace {

struct CorrectionEval {
  Vec3 point;
  Mat3 dmap; // derivative of the corrected map w.r.t. reference coords
};

/// The corrected element map base(xref) + (lam*)^{r+2} (b(y) - y) and its
/// reference derivative. For the modified lift the base map is F^(r); for
/// the Elliott lift it is the affine F_T. The derivative assembles the chain
/// rule through lam* (affine), y_hat (rational) and the projection.
CorrectionEval corrected_map(const CurvedMesh& mesh, LiftVariant variant, int cell,
                             const Vec3& xref, bool with_derivative) {
  const AffineMesh& affine = mesh.affine();
  const ImplicitDomain& domain = *mesh.domain();
  const int r = mesh.degree();

  CorrectionEval out;
  MapEval base;
  Mat3 dy_base;
  Vec3 y;

  const Bary lam = ref_to_bary(xref, 2);
  const auto eps = affine.cell_eps(cell);
  double lam_star = 0.0;
  for (int i = 0; i < 3; ++i)
    if (eps[i]) lam_star += lam[i];

  if (variant == LiftVariant::Modified) {
    base = mesh.map(cell, xref);
  } else {
    base.x = affine.affine_map(cell, xref);
    base.jacobian = affine.affine_jacobian(cell);
  }
  out.point = base.x;
  out.dmap = base.jacobian;
  if (lam_star < 1e-12) return out; // correction of order r+2 vanishes

  Bary ylam{0, 0, 0, 0};
  for (int i = 0; i < 3; ++i)
    if (eps[i]) ylam[i] = lam[i] / lam_star;
  const Vec3 yref = bary_to_ref(ylam, 2);
  if (variant == LiftVariant::Modified) {
    const MapEval me = mesh.map(cell, yref);
    y = me.x;
    dy_base = me.jacobian;
  } else {
    y = affine.affine_map(cell, yref);
    dy_base = affine.affine_jacobian(cell);
  }

  if (std::abs(domain.signed_distance(y)) >= domain.tubular_radius())
    throw OutsideTubularNeighborhood("lift: mesh too coarse for the geometry");
  const Vec3 by = domain.project(y);
  const double pw = std::pow(lam_star, r + 2);
  out.point = base.x + pw * (by - y);
  if (!with_derivative) return out;

  // reference gradients of the barycentric coordinates
  const Vec3 grad_lam[3] = {{-1, -1, 0}, {1, 0, 0}, {0, 1, 0}};
  Vec3 grad_star{0, 0, 0};
  for (int i = 0; i < 3; ++i)
    if (eps[i]) grad_star += grad_lam[i];

  // d yref / d xref = (S - yref grad_star^T) / lam_star with
  // S = sum_i eps_i vref_i grad_lam_i^T = diag(eps_1, eps_2)
  Mat3 s;
  s(0, 0) = eps[1] ? 1.0 : 0.0;
  s(1, 1) = eps[2] ? 1.0 : 0.0;
  const Mat3 dyref = (1.0 / lam_star) * (s - outer(yref, grad_star, 2, 2));

  const Mat3 db = domain.projection_jacobian(y);
  const double dpw = (r + 2) * std::pow(lam_star, r + 1);
  const Mat3 dcorr = dpw * outer(by - y, grad_star, 2, 2) +
                     pw * matmul(db - Mat3::identity(2), matmul(dy_base, dyref, 2, 2, 2), 2, 2, 2);
  out.dmap = out.dmap + dcorr;
  return out;
}

bool identity_lift(const CurvedMesh& mesh, int cell) {
  return mesh.domain() == nullptr ||
         (!mesh.affine().surface && mesh.cell_class(cell) == CellClass::Internal);
}

} // namespace

Vec3 LiftMap::lift_point(int cell, const Vec3& xref) const {
  if (identity_lift(*mesh_, cell)) return mesh_->map_point(cell, xref);
  if (mesh_->affine().surface) return mesh_->domain()->project(mesh_->map_point(cell, xref));
  return corrected_map(*mesh_, variant_, cell, xref, false).point;
}

LiftEval LiftMap::lift_jacobian(int cell, const Vec3& xref) const {
  if (mesh_->affine().surface)
    throw DegenerateLift("volume lift jacobian is undefined on surface meshes");
  LiftEval out;
  if (identity_lift(*mesh_, cell)) {
    out.point = mesh_->map_point(cell, xref);
    out.jacobian = Mat3::identity(2);
    out.jdet = 1.0;
    return out;
  }
  const MapEval base = mesh_->map(cell, xref); // checks det DF^(r) > 0
  const CorrectionEval ce = corrected_map(*mesh_, variant_, cell, xref, true);
  out.point = ce.point;
  out.jacobian = matmul(ce.dmap, inverse(base.jacobian, 2), 2, 2, 2);
  out.jdet = det(out.jacobian, 2);
  if (out.jdet <= 0.0) throw DegenerateLift("volume lift with non-positive jacobian");
  return out;
}

double LiftMap::surface_jacobian_face(int cell, int local_edge, double t) const {
  const MapEval me = mesh_->map(cell, edge_point_ref(local_edge, t));
  // reference direction of the edge
  const int a = (local_edge + 1) % 3, b = (local_edge + 2) % 3;
  const Vec3 vref[3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  const Vec3 eref = vref[b] - vref[a];
  const Vec3 tau = matvec(me.jacobian, eref, 2, 2);
  const double len = norm(tau);
  if (len <= 0.0) throw DegenerateFace("boundary edge with zero tangent");
  const Mat3 db = mesh_->domain()->projection_jacobian(me.x);
  const double blen = norm(matvec(db, tau, 2, 2));
  if (blen <= 0.0) throw DegenerateFace("projected edge tangent vanished");
  return blen / len;
}

double LiftMap::surface_jacobian_cell(int cell, const Vec3& xref) const {
  if (!mesh_->affine().surface)
    throw DegenerateFace("surface_jacobian_cell needs a surface mesh");
  const MapEval me = mesh_->map(cell, xref); // jdet = sqrt(det gram) > 0
  const Mat3 db = mesh_->domain()->projection_jacobian(me.x);
  const Mat3 bj = matmul(db, me.jacobian, 3, 3, 2);
  const double g = det(gram(bj, 3, 2), 2);
  if (g <= 0.0) throw DegenerateFace("projected metric is singular");
  return std::sqrt(g) / me.jdet;
}

Vec3 LiftMap::inverse_ref_coords(int cell, const Vec3& x) const {
  const AffineMesh& affine = mesh_->affine();
  const double h = affine.cell_diameter(cell);
  const int ad = affine.ambient_dim;

  // affine initial guess (exact for r = 1 planar cells)
  const Mat3 a_jac = affine.affine_jacobian(cell);
  const Vec3 rhs0 = x - affine.cell_vertex(cell, 0);
  Vec3 xref;
  if (ad == 2) {
    xref = matvec(inverse(a_jac, 2), rhs0, 2, 2);
  } else {
    const Mat3 g = gram(a_jac, 3, 2);
    xref = matvec(inverse(g, 2), matTvec(a_jac, rhs0, 3, 2), 2, 2);
  }

  const double tol = 1e-12 * std::max(h, 1e-3);
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    const MapEval me = mesh_->map(cell, xref);
    const Vec3 res = x - me.x;
    if (norm(res) <= tol) {
      converged = true;
      break;
    }
    Vec3 step;
    if (ad == 2) {
      step = matvec(inverse(me.jacobian, 2), res, 2, 2);
    } else {
      // least-squares step for surface cells (3x2 jacobian)
      const Mat3 g = gram(me.jacobian, 3, 2);
      step = matvec(inverse(g, 2), matTvec(me.jacobian, res, 3, 2), 2, 2);
    }
    xref += step;
  }
  if (!converged) throw NewtonDivergence("inverse_ref_coords: Newton did not converge");
  const Bary lam = ref_to_bary(xref, 2);
  for (int i = 0; i < 3; ++i)
    if (lam[i] < -1e-8) throw OutsideElement("inverse_ref_coords: point outside the element");
  return xref;
}

std::function<double(int, const Vec3&)> inverse_lift_volume(
    const LiftMap& lift, std::function<double(const Vec3&)> f) {
  return [&lift, f = std::move(f)](int cell, const Vec3& xref) {
    return f(lift.lift_point(cell, xref));
  };
}

std::function<double(const Vec3&)> inverse_lift_surface(const ImplicitDomain& domain,
                                                        std::function<double(const Vec3&)> g) {
  return [&domain, g = std::move(g)](const Vec3& x) { return g(domain.project(x)); };
}

double lifted_measure(const LiftMap& lift, int order, int grading_depth) {
  const CurvedMesh& mesh = lift.mesh();
  const QuadratureRule rule = quadrature(2, order);

  double total = 0.0;
  const auto add_subtriangle = [&](int c, const Vec3& a, const Vec3& b, const Vec3& d) {
    const double scale = std::abs((b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0]));
    for (int q = 0; q < rule.size(); ++q) {
      const Vec3 p = rule.point_ref(q);
      const Vec3 xref = a + p[0] * (b - a) + p[1] * (d - a);
      total += rule.weights[q] * scale * mesh.map(c, xref).jdet * lift.lift_jacobian(c, xref).jdet;
    }
  };

  for (int c = 0; c < mesh.n_cells(); ++c) {
    if (mesh.domain() == nullptr || mesh.cell_class(c) == CellClass::Internal) {
      // straight interior cells: J_G = 1 and det DF is polynomial
      for (int q = 0; q < rule.size(); ++q)
        total += rule.weights[q] * mesh.map(c, rule.point_ref(q)).jdet;
      continue;
    }
    // Boundary cells: the corrected map loses analyticity at the vertex with
    // vanishing boundary weight (graded chain toward it), and the distance
    // field's focal points can sit close to the cell (two uniform composite
    // levels first).
    const auto eps = mesh.affine().cell_eps(c);
    int bad = 0;
    for (int v = 0; v < 3; ++v)
      if (!eps[v]) bad = v;
    const Vec3 vref[3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};

    // bad_slot: local corner index of the non-smooth vertex, -1 if outside
    const std::function<void(Vec3[3], int, int)> walk = [&](Vec3 corner[3], int bad_slot,
                                                            int uniform_left) {
      if (uniform_left > 0) {
        Vec3 mid[3];
        for (int e = 0; e < 3; ++e) mid[e] = 0.5 * (corner[(e + 1) % 3] + corner[(e + 2) % 3]);
        for (int v = 0; v < 3; ++v) {
          Vec3 child[3] = {corner[v], mid[(v + 2) % 3], mid[(v + 1) % 3]};
          walk(child, v == bad_slot ? 0 : -1, uniform_left - 1);
        }
        Vec3 center[3] = {mid[0], mid[1], mid[2]};
        walk(center, -1, uniform_left - 1);
        return;
      }
      if (bad_slot < 0) {
        add_subtriangle(c, corner[0], corner[1], corner[2]);
        return;
      }
      for (int level = 0; level <= grading_depth; ++level) {
        if (level == grading_depth) {
          add_subtriangle(c, corner[0], corner[1], corner[2]);
          break;
        }
        Vec3 mid[3];
        for (int e = 0; e < 3; ++e) mid[e] = 0.5 * (corner[(e + 1) % 3] + corner[(e + 2) % 3]);
        for (int v = 0; v < 3; ++v)
          if (v != bad_slot) add_subtriangle(c, corner[v], mid[(v + 2) % 3], mid[(v + 1) % 3]);
        add_subtriangle(c, mid[0], mid[1], mid[2]);
        for (int v = 0; v < 3; ++v)
          if (v != bad_slot) corner[v] = 0.5 * (corner[v] + corner[bad_slot]);
      }
    };
    Vec3 corner[3] = {vref[0], vref[1], vref[2]};
    walk(corner, bad, 2);
  }
  return total;
}

double max_trace_deviation(const LiftMap& lift, int quad_order) {
  const CurvedMesh& mesh = lift.mesh();
  if (mesh.domain() == nullptr) return 0.0;
  double worst = 0.0;
  const QuadratureRule line = quadrature(1, quad_order);
  if (mesh.affine().surface) {
    const QuadratureRule tri = quadrature(2, 12);
    for (int c = 0; c < mesh.n_cells(); ++c)
      for (int q = 0; q < tri.size(); ++q) {
        const Vec3 xref = tri.point_ref(q);
        const Vec3 dev = lift.lift_point(c, xref) -
                         mesh.domain()->project(mesh.map_point(c, xref));
        worst = std::max(worst, norm(dev));
      }
    return worst;
  }
  for (const auto& [c, le] : mesh.affine().boundary_faces)
    for (int q = 0; q < line.size(); ++q) {
      const Vec3 xref = edge_point_ref(le, line.points[q][1]);
      const Vec3 dev =
          lift.lift_point(c, xref) - mesh.domain()->project(mesh.map_point(c, xref));
      worst = std::max(worst, norm(dev));
    }
  return worst;
}

} // namespace cfem
