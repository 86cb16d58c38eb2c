#include "curvefem/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "curvefem/errors.hpp"

namespace cfem {

void ProblemSpec::validate() const {
  if (kappa < 0.0 || alpha < 0.0 || beta < 0.0)
    throw ConfigError("problem coefficients must be non-negative");
  if (kappa == 0.0 && alpha == 0.0)
    throw ConfigError("kappa and alpha cannot both vanish (singular problem)");
}

ProblemSpec ventcel_disk_problem() {
  ProblemSpec spec;
  spec.kappa = 0.0;
  spec.alpha = 1.0;
  spec.beta = 1.0;
  spec.f = [](const Vec3& p) { return -p[1] * std::exp(p[0]); };
  spec.g = [](const Vec3& p) {
    return p[1] * std::exp(p[0]) * (3.0 + 4.0 * p[0] - p[1] * p[1]);
  };
  spec.exact_u = [](const Vec3& p) { return p[1] * std::exp(p[0]); };
  spec.exact_grad_u = [](const Vec3& p) {
    return Vec3{p[1] * std::exp(p[0]), std::exp(p[0]), 0.0};
  };
  return spec;
}

ProblemSpec sphere_laplace_problem() {
  ProblemSpec spec;
  spec.kappa = 1.0; // reaction coefficient of -Laplace_Gamma u + u
  spec.alpha = 1.0;
  spec.beta = 1.0;
  spec.g = [](const Vec3& p) { return std::exp(p[1]) * (p[1] + 2.0) * p[1]; };
  spec.exact_u = [](const Vec3& p) { return std::exp(p[1]); };
  // tangential gradient of e^y on the unit sphere
  spec.exact_grad_u = [](const Vec3& p) {
    const double ey = std::exp(p[1]);
    const Vec3 grad{0.0, ey, 0.0};
    return grad - (dot(grad, p)) * p;
  };
  return spec;
}

int volume_quadrature_order(int k, int r) { return 2 * k + (r - 1) * 2 + 2; }
int surface_quadrature_order(int k, int r) { return 2 * k + 2 * r + 2; }

CsrMatrix build_sparsity(const FESpace& space) {
  const int n = space.n_dofs();
  std::vector<std::vector<std::int32_t>> cols(n);
  for (int c = 0; c < space.mesh().n_cells(); ++c)
    for (int i = 0; i < space.n_local(); ++i) {
      const int gi = space.global_dof(c, i);
      for (int j = 0; j < space.n_local(); ++j) cols[gi].push_back(space.global_dof(c, j));
    }
  CsrMatrix a;
  a.n = n;
  a.row_ptr.resize(n + 1, 0);
  for (int row = 0; row < n; ++row) {
    auto& rc = cols[row];
    std::sort(rc.begin(), rc.end());
    rc.erase(std::unique(rc.begin(), rc.end()), rc.end());
    a.row_ptr[row + 1] = a.row_ptr[row] + static_cast<std::int32_t>(rc.size());
  }
  a.col_idx.reserve(a.row_ptr[n]);
  for (int row = 0; row < n; ++row)
    a.col_idx.insert(a.col_idx.end(), cols[row].begin(), cols[row].end());
  a.values.assign(a.col_idx.size(), 0.0);
  return a;
}

namespace {

void scatter(CsrMatrix& a, const FESpace& space, int cell, const std::vector<double>& local) {
  const int n = space.n_local();
  for (int i = 0; i < n; ++i) {
    const int gi = space.global_dof(cell, i);
    for (int j = 0; j < n; ++j) a.at(gi, space.global_dof(cell, j)) += local[i * n + j];
  }
}

int resolve_order(int requested, int policy) {
  if (requested < 0) return policy;
  if (requested < policy) throw QuadratureOrderTooLow("quadrature order below the policy bound");
  return requested;
}

/// Geometric Jacobian at a tabulated point from the control points.
Mat3 geometry_jacobian(const CurvedMesh& mesh, int cell, const BasisTable& table, int q) {
  const Vec3* cp = mesh.control_points(cell);
  const int ng = mesh.geometry_basis().size();
  const int ad = mesh.ambient_dim();
  Mat3 jac;
  for (int i = 0; i < ng; ++i) {
    const Vec3& g = table.grad(q, i);
    for (int a = 0; a < ad; ++a)
      for (int j = 0; j < 2; ++j) jac(a, j) += cp[i][a] * g[j];
  }
  return jac;
}

Vec3 geometry_point(const CurvedMesh& mesh, int cell, const BasisTable& table, int q) {
  const Vec3* cp = mesh.control_points(cell);
  const int ng = mesh.geometry_basis().size();
  Vec3 x{0, 0, 0};
  for (int i = 0; i < ng; ++i) x += table.value(q, i) * cp[i];
  return x;
}

} // namespace

LinearSystem assemble_ventcel(const FESpace& space, const ProblemSpec& spec, const LiftMap& lift,
                              int volume_order, int surface_order) {
  spec.validate();
  const CurvedMesh& mesh = space.mesh();
  if (mesh.affine().surface)
    throw DegenerateElement("assemble_ventcel needs a planar mesh (bulk problem)");
  if (&lift.mesh() != &mesh) throw Error("lift and space use different meshes");

  const int k = space.degree();
  const int r = mesh.degree();
  const int vol_order = resolve_order(volume_order, volume_quadrature_order(k, r));
  const int surf_order = resolve_order(surface_order, surface_quadrature_order(k, r));

  const QuadratureRule vol_rule = quadrature(2, vol_order);
  const BasisTable fe_vol = tabulate(space.basis(), vol_rule.points);
  const BasisTable geo_vol = tabulate(mesh.geometry_basis(), vol_rule.points);

  LinearSystem sys;
  sys.matrix = build_sparsity(space);
  sys.rhs.assign(space.n_dofs(), 0.0);

  const int n = space.n_local();
  std::vector<double> local(n * n);
  std::vector<double> local_rhs(n);
  std::vector<Vec3> phys_grad(n);

  // volume terms: grad.grad + kappa mass, rhs f(G) J_G
  for (int c = 0; c < mesh.n_cells(); ++c) {
    std::fill(local.begin(), local.end(), 0.0);
    std::fill(local_rhs.begin(), local_rhs.end(), 0.0);
    const bool lifted = mesh.cell_class(c) == CellClass::Boundary && mesh.domain() != nullptr;
    for (int q = 0; q < vol_rule.size(); ++q) {
      const Mat3 jac = geometry_jacobian(mesh, c, geo_vol, q);
      const double jdet = det(jac, 2);
      if (jdet <= 0.0) throw DegenerateElement("cell with non-positive jacobian");
      const Mat3 jinv_t = transpose(inverse(jac, 2), 2, 2);
      for (int i = 0; i < n; ++i) phys_grad[i] = matvec(jinv_t, fe_vol.grad(q, i), 2, 2);

      const double w = vol_rule.weights[q] * jdet;
      for (int i = 0; i < n; ++i) {
        const double vi = fe_vol.value(q, i);
        for (int j = 0; j <= i; ++j) {
          const double entry =
              w * (dot(phys_grad[i], phys_grad[j]) + spec.kappa * vi * fe_vol.value(q, j));
          local[i * n + j] += entry;
          if (i != j) local[j * n + i] += entry;
        }
      }
      if (spec.f) {
        double source;
        if (lifted) {
          const LiftEval ge = lift.lift_jacobian(c, vol_rule.point_ref(q));
          source = spec.f(ge.point) * ge.jdet;
        } else {
          source = spec.f(geometry_point(mesh, c, geo_vol, q));
        }
        for (int i = 0; i < n; ++i) local_rhs[i] += w * source * fe_vol.value(q, i);
      }
    }
    scatter(sys.matrix, space, c, local);
    for (int i = 0; i < n; ++i) sys.rhs[space.global_dof(c, i)] += local_rhs[i];
  }

  // boundary terms: beta tangential stiffness + alpha mass, rhs g(b) J_b
  const QuadratureRule line_rule = quadrature(1, surf_order);
  std::vector<BasisTable> fe_face(3), geo_face(3);
  for (int le = 0; le < 3; ++le) {
    std::vector<Bary> pts;
    for (int q = 0; q < line_rule.size(); ++q)
      pts.push_back(ref_to_bary(edge_point_ref(le, line_rule.points[q][1]), 2));
    fe_face[le] = tabulate(space.basis(), pts);
    geo_face[le] = tabulate(mesh.geometry_basis(), pts);
  }
  const Vec3 vref[3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};

  for (const auto& [c, le] : mesh.affine().boundary_faces) {
    std::fill(local.begin(), local.end(), 0.0);
    std::fill(local_rhs.begin(), local_rhs.end(), 0.0);
    const Vec3 eref = vref[(le + 2) % 3] - vref[(le + 1) % 3];
    for (int q = 0; q < line_rule.size(); ++q) {
      const Mat3 jac = geometry_jacobian(mesh, c, geo_face[le], q);
      const Vec3 tau = matvec(jac, eref, 2, 2);
      const double arc = norm(tau);
      if (arc <= 0.0) throw DegenerateFace("boundary edge with zero tangent");
      const double w = line_rule.weights[q] * arc;
      const double inv_len2 = 1.0 / (arc * arc);

      for (int i = 0; i < n; ++i) {
        // tangential gradient factor: (tau . tau)^{-1} (dphi/dt)
        const double dt_i = dot(fe_face[le].grad(q, i), eref);
        const double vi = fe_face[le].value(q, i);
        for (int j = 0; j <= i; ++j) {
          const double dt_j = dot(fe_face[le].grad(q, j), eref);
          const double entry =
              w * (spec.beta * inv_len2 * dt_i * dt_j + spec.alpha * vi * fe_face[le].value(q, j));
          local[i * n + j] += entry;
          if (i != j) local[j * n + i] += entry;
        }
      }
      if (spec.g) {
        double source;
        const Vec3 x = geometry_point(mesh, c, geo_face[le], q);
        if (mesh.domain() != nullptr) {
          const double jb = lift.surface_jacobian_face(c, le, line_rule.points[q][1]);
          source = spec.g(mesh.domain()->project(x)) * jb;
        } else {
          source = spec.g(x); // polygonal meshes: boundary is exact
        }
        for (int i = 0; i < n; ++i) local_rhs[i] += w * source * fe_face[le].value(q, i);
      }
    }
    scatter(sys.matrix, space, c, local);
    for (int i = 0; i < n; ++i) sys.rhs[space.global_dof(c, i)] += local_rhs[i];
  }
  return sys;
}

LinearSystem assemble_surface_laplace(const FESpace& space, const ScalarField& g, int order) {
  const CurvedMesh& mesh = space.mesh();
  if (!mesh.affine().surface)
    throw DegenerateElement("assemble_surface_laplace needs a surface mesh");
  const ImplicitDomain& domain = *mesh.domain();

  const int rule_order =
      resolve_order(order, surface_quadrature_order(space.degree(), mesh.degree()));
  const QuadratureRule rule = quadrature(2, rule_order);
  const BasisTable fe = tabulate(space.basis(), rule.points);
  const BasisTable geo = tabulate(mesh.geometry_basis(), rule.points);

  LinearSystem sys;
  sys.matrix = build_sparsity(space);
  sys.rhs.assign(space.n_dofs(), 0.0);

  const int n = space.n_local();
  std::vector<double> local(n * n);
  std::vector<double> local_rhs(n);
  std::vector<Vec3> tan_grad(n);

  for (int c = 0; c < mesh.n_cells(); ++c) {
    std::fill(local.begin(), local.end(), 0.0);
    std::fill(local_rhs.begin(), local_rhs.end(), 0.0);
    for (int q = 0; q < rule.size(); ++q) {
      const Mat3 jac = geometry_jacobian(mesh, c, geo, q);
      const Mat3 metric = gram(jac, 3, 2);
      const double gdet = det(metric, 2);
      if (gdet <= 0.0) throw DegenerateElement("surface cell with singular metric");
      const double sdet = std::sqrt(gdet);
      const Mat3 ginv = inverse(metric, 2);
      for (int i = 0; i < n; ++i)
        tan_grad[i] = matvec(jac, matvec(ginv, fe.grad(q, i), 2, 2), 3, 2);

      const double w = rule.weights[q] * sdet;
      for (int i = 0; i < n; ++i) {
        const double vi = fe.value(q, i);
        for (int j = 0; j <= i; ++j) {
          const double entry = w * (dot(tan_grad[i], tan_grad[j]) + vi * fe.value(q, j));
          local[i * n + j] += entry;
          if (i != j) local[j * n + i] += entry;
        }
      }
      if (g) {
        const Vec3 x = geometry_point(mesh, c, geo, q);
        const Mat3 db = domain.projection_jacobian(x);
        const double gb_det = det(gram(matmul(db, jac, 3, 3, 2), 3, 2), 2);
        if (gb_det <= 0.0) throw DegenerateFace("projected metric is singular");
        const double jb = std::sqrt(gb_det) / sdet;
        const double source = g(domain.project(x)) * jb;
        for (int i = 0; i < n; ++i) local_rhs[i] += w * source * fe.value(q, i);
      }
    }
    scatter(sys.matrix, space, c, local);
    for (int i = 0; i < n; ++i) sys.rhs[space.global_dof(c, i)] += local_rhs[i];
  }
  return sys;
}

} // namespace cfem
