#include "curvefem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "curvefem/errors.hpp"
#include "curvefem/solver.hpp"

namespace cfem {

namespace {

int error_quadrature_order(int k, int r) { return std::min(20, 2 * k + 2 * r + 4); }

} // namespace

ErrorRecord lifted_errors(const FESpace& space, const std::vector<double>& coeffs,
                          const ProblemSpec& spec, const LiftMap& lift) {
  if (!spec.exact_u || !spec.exact_grad_u)
    throw Error("lifted_errors needs the exact solution and its gradient");
  const CurvedMesh& mesh = space.mesh();
  const ImplicitDomain* domain = mesh.domain();
  const int k = space.degree();
  const int r = mesh.degree();
  const int order = error_quadrature_order(k, r);
  const int n = space.n_local();

  ErrorRecord rec;
  rec.h = mesh.affine().h;
  rec.n_dofs = space.n_dofs();

  double l2b = 0.0, h1b = 0.0, l2s = 0.0, h1s = 0.0;

  if (!mesh.affine().surface) {
    // bulk norms through the volume lift
    const QuadratureRule rule = quadrature(2, order);
    const BasisTable fe = tabulate(space.basis(), rule.points);
    const BasisTable geo = tabulate(mesh.geometry_basis(), rule.points);
    const int ng = mesh.geometry_basis().size();
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const Vec3* cp = mesh.control_points(c);
      const bool lifted = mesh.cell_class(c) == CellClass::Boundary && domain != nullptr;
      for (int q = 0; q < rule.size(); ++q) {
        Vec3 x{0, 0, 0};
        Mat3 jac;
        for (int i = 0; i < ng; ++i) {
          x += geo.value(q, i) * cp[i];
          for (int a = 0; a < 2; ++a)
            for (int j = 0; j < 2; ++j) jac(a, j) += cp[i][a] * geo.grad(q, i)[j];
        }
        const double jdet = det(jac, 2);
        const Mat3 jinv_t = transpose(inverse(jac, 2), 2, 2);

        double uh = 0.0;
        Vec3 ref_grad{0, 0, 0};
        for (int i = 0; i < n; ++i) {
          const double u = coeffs[space.global_dof(c, i)];
          uh += u * fe.value(q, i);
          ref_grad += u * fe.grad(q, i);
        }
        const Vec3 phys_grad = matvec(jinv_t, ref_grad, 2, 2);

        Vec3 z = x;
        Vec3 lifted_grad = phys_grad;
        double jg = 1.0;
        if (lifted) {
          const LiftEval ge = lift.lift_jacobian(c, rule.point_ref(q));
          z = ge.point;
          jg = ge.jdet;
          lifted_grad = matvec(transpose(inverse(ge.jacobian, 2), 2, 2), phys_grad, 2, 2);
        }
        const double w = rule.weights[q] * jdet * jg;
        const double du = spec.exact_u(z) - uh;
        const Vec3 dg = spec.exact_grad_u(z) - lifted_grad;
        l2b += w * du * du;
        h1b += w * dot(dg, dg);
      }
    }

    // surface norms through the boundary projection
    if (domain != nullptr) {
      const QuadratureRule line = quadrature(1, order);
      const Vec3 vref[3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
      for (const auto& [c, le] : mesh.affine().boundary_faces) {
        const Vec3 eref = vref[(le + 2) % 3] - vref[(le + 1) % 3];
        for (int q = 0; q < line.size(); ++q) {
          const double t = line.points[q][1];
          const Vec3 xref = edge_point_ref(le, t);
          const MapEval me = mesh.map(c, xref);
          const Vec3 tau = matvec(me.jacobian, eref, 2, 2);
          const double arc = norm(tau);

          const FESpace::FuncEval fv = space.eval(coeffs, c, xref);
          const double duh_dt = dot(fv.ref_grad, eref);

          const Vec3 z = domain->project(me.x);
          const Mat3 db = domain->projection_jacobian(me.x);
          const Vec3 btau = matvec(db, tau, 2, 2);
          const double blen2 = dot(btau, btau);
          const double jb = std::sqrt(blen2) / arc;
          // tangential gradient of the lifted function on the exact boundary
          const Vec3 tlift = (duh_dt / blen2) * btau;

          const Vec3 nrm = domain->grad_distance(z);
          const Vec3 gu = spec.exact_grad_u(z);
          const Vec3 tu = gu - dot(gu, nrm) * nrm;

          const double w = line.weights[q] * arc * jb;
          const double du = spec.exact_u(z) - fv.value;
          const Vec3 dg = tu - tlift;
          l2s += w * du * du;
          h1s += w * dot(dg, dg);
        }
      }
    }
  } else {
    // surface problem: cells are the surface, the lift is the projection
    const QuadratureRule rule = quadrature(2, order);
    const BasisTable fe = tabulate(space.basis(), rule.points);
    const BasisTable geo = tabulate(mesh.geometry_basis(), rule.points);
    const int ng = mesh.geometry_basis().size();
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const Vec3* cp = mesh.control_points(c);
      for (int q = 0; q < rule.size(); ++q) {
        Vec3 x{0, 0, 0};
        Mat3 jac;
        for (int i = 0; i < ng; ++i) {
          x += geo.value(q, i) * cp[i];
          for (int a = 0; a < 3; ++a)
            for (int j = 0; j < 2; ++j) jac(a, j) += cp[i][a] * geo.grad(q, i)[j];
        }
        const double sdet = std::sqrt(det(gram(jac, 3, 2), 2));

        double uh = 0.0;
        Vec3 ref_grad{0, 0, 0};
        for (int i = 0; i < n; ++i) {
          const double u = coeffs[space.global_dof(c, i)];
          uh += u * fe.value(q, i);
          ref_grad += u * fe.grad(q, i);
        }

        const Vec3 z = domain->project(x);
        const Mat3 bjac = matmul(domain->projection_jacobian(x), jac, 3, 3, 2);
        const Mat3 gb = gram(bjac, 3, 2);
        const double gb_det = det(gb, 2);
        const double jb = std::sqrt(gb_det) / sdet;
        const Vec3 tlift = matvec(bjac, matvec(inverse(gb, 2), ref_grad, 2, 2), 3, 2);

        const Vec3 nrm = domain->grad_distance(z);
        const Vec3 gu = spec.exact_grad_u(z);
        const Vec3 tu = gu - dot(gu, nrm) * nrm;

        const double w = rule.weights[q] * sdet * jb;
        const double du = spec.exact_u(z) - uh;
        const Vec3 dg = tu - tlift;
        l2s += w * du * du;
        h1s += w * dot(dg, dg);
      }
    }
  }

  rec.e_L2_bulk = std::sqrt(l2b);
  rec.e_H1semi_bulk = std::sqrt(h1b);
  rec.e_L2_surf = std::sqrt(l2s);
  rec.e_H1semi_surf = std::sqrt(h1s);
  return rec;
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size() || errors.size() < 2)
    throw Error("eoc needs at least two matching records");
  for (std::size_t i = 0; i + 1 < hs.size(); ++i)
    if (!(hs[i] > hs[i + 1])) throw Error("eoc needs strictly decreasing h");
  for (double e : errors)
    if (e < 1e-14) throw ZeroError("error below 1e-14: order ratio is meaningless");
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    orders.push_back(std::log(errors[i] / errors[i + 1]) / std::log(hs[i] / hs[i + 1]));
  return orders;
}

double eoc_slope(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size() || errors.size() < 2)
    throw Error("eoc_slope needs at least two matching records");
  for (double e : errors)
    if (e < 1e-14) throw ZeroError("error below 1e-14: slope is meaningless");
  const std::size_t n = errors.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(hs[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double StudyReport::finest_order(int which) const {
  if (!eoc[which].valid || eoc[which].pairwise.empty())
    return std::numeric_limits<double>::quiet_NaN();
  return eoc[which].pairwise.back();
}

void write_study_csv(const StudyReport& report, std::ostream& out) {
  out << kStudyCsvHeader << "\n";
  char buf[256];
  for (const auto& rec : report.records) {
    std::snprintf(buf, sizeof(buf), "%.16g,%d,%.16g,%.16g,%.16g,%.16g\n", rec.h, rec.n_dofs,
                  rec.e_L2_bulk, rec.e_H1semi_bulk, rec.e_L2_surf, rec.e_H1semi_surf);
    out << buf;
  }
}

namespace {

std::string row_label(int r) {
  if (r == 1) return "Affine mesh (r=1)";
  if (r == 2) return "Quadratic mesh (r=2)";
  if (r == 3) return "Cubic mesh (r=3)";
  return "Degree-" + std::to_string(r) + " mesh";
}

std::string format_order(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string one_table(const std::string& title_left, const std::string& title_right,
                      int norm_left, int norm_right, const std::vector<int>& rs,
                      const std::vector<int>& ks, const std::vector<StudyReport>& reports) {
  const auto find = [&](int r, int k) -> const StudyReport* {
    for (const auto& rep : reports)
      if (rep.r == r && rep.k == k) return &rep;
    return nullptr;
  };
  std::string out = "**" + title_left + " | " + title_right + "**\n\n";
  out += "| mesh |";
  for (int pass = 0; pass < 2; ++pass)
    for (int k : ks) out += " P" + std::to_string(k) + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < 2 * ks.size(); ++i) out += "---|";
  out += "\n";
  for (int r : rs) {
    out += "| " + row_label(r) + " |";
    for (int which : {norm_left, norm_right})
      for (int k : ks) {
        const StudyReport* rep = find(r, k);
        out += " " + (rep ? format_order(rep->finest_order(which)) : std::string("-")) + " |";
      }
    out += "\n";
  }
  out += "\n";
  return out;
}

} // namespace

std::string eoc_markdown_tables(const std::string& problem,
                                const std::vector<StudyReport>& reports) {
  std::vector<int> rs, ks;
  for (const auto& rep : reports) {
    if (std::find(rs.begin(), rs.end(), rep.r) == rs.end()) rs.push_back(rep.r);
    if (std::find(ks.begin(), ks.end(), rep.k) == ks.end()) ks.push_back(rep.k);
  }
  std::sort(rs.begin(), rs.end());
  std::sort(ks.begin(), ks.end());

  std::string out = "# Convergence orders: " + problem + "\n\n";
  if (problem.find("sphere") != std::string::npos) {
    out += one_table("L2(Gamma)", "H1(Gamma)", 2, 3, rs, ks, reports);
  } else {
    out += one_table("L2(Gamma)", "H1(Gamma) semi", 2, 3, rs, ks, reports);
    out += one_table("L2(Omega)", "H1(Omega) semi", 0, 1, rs, ks, reports);
  }
  return out;
}

namespace {

void fill_eoc(StudyReport& report) {
  std::vector<double> hs;
  for (const auto& rec : report.records) hs.push_back(rec.h);
  for (int which = 0; which < 4; ++which) {
    std::vector<double> errs;
    for (const auto& rec : report.records) errs.push_back(rec.norm(which));
    const bool meaningful =
        std::all_of(errs.begin(), errs.end(), [](double e) { return e >= 1e-14; });
    if (!meaningful) continue;
    report.eoc[which].valid = true;
    report.eoc[which].pairwise = eoc(errs, hs);
    report.eoc[which].slope = eoc_slope(errs, hs);
  }
}

std::string canonical_problem(const std::string& problem) {
  std::string p = problem;
  std::replace(p.begin(), p.end(), '_', '-');
  if (p != "ventcel-disk" && p != "sphere-laplace")
    throw ConfigError("unknown problem '" + problem + "' (ventcel-disk|sphere-laplace)");
  return p;
}

} // namespace

StudyReport run_study(const std::string& problem, int r, int k, int levels, LiftVariant lift) {
  const std::string prob = canonical_problem(problem);
  if (r < 1 || r > 3) throw ConfigError("mesh degree r must be in {1,2,3}");
  if (k < 1 || k > 4) throw ConfigError("FE degree k must be in {1,..,4}");
  if (levels < 2) throw ConfigError("levels must be >= 2");

  StudyReport report;
  report.problem = prob;
  report.r = r;
  report.k = k;
  report.lift = lift;

  const bool sphere = prob == "sphere-laplace";
  const DomainPtr domain = sphere ? unit_sphere_surface() : unit_disk();
  const ProblemSpec spec = sphere ? sphere_laplace_problem() : ventcel_disk_problem();

  AffineMesh base = sphere ? generate_sphere_surface_mesh(1) : generate_disk_mesh(3);
  for (int level = 0; level < levels; ++level) {
    if (level > 0) base = refine(base, domain.get());
    auto affine = std::make_shared<const AffineMesh>(base);
    auto curved = std::make_shared<const CurvedMesh>(affine, domain, r);
    auto space = FESpace(curved, k);
    const LiftMap lift_map(curved, lift);

    LinearSystem sys = sphere ? assemble_surface_laplace(space, spec.g)
                              : assemble_ventcel(space, spec, lift_map);
    auto [coeffs, solve_report] = solve_cg(sys.matrix, sys.rhs, 1e-12);
    (void)solve_report;
    report.records.push_back(lifted_errors(space, coeffs, spec, lift_map));
  }
  fill_eoc(report);
  return report;
}

GeometricErrorReport geometric_error_study(const std::string& domain_name, int r, int levels) {
  if (r < 1 || r > 3) throw ConfigError("mesh degree r must be in {1,2,3}");
  if (levels < 2) throw ConfigError("levels must be >= 2");

  GeometricErrorReport report;
  report.domain = domain_name;
  report.r = r;

  DomainPtr domain;
  AffineMesh base;
  if (domain_name == "disk") {
    domain = unit_disk();
    base = generate_disk_mesh(3);
  } else if (domain_name == "flower") {
    domain = flower();
    base = generate_flower_mesh(3);
  } else {
    throw ConfigError("geometric error study supports disk|flower");
  }
  const double exact = domain->exact_volume();

  const QuadratureRule rule = quadrature(2, 19);
  for (int level = 0; level < levels; ++level) {
    if (level > 0) base = refine(base, domain.get());
    auto affine = std::make_shared<const AffineMesh>(base);
    auto curved = std::make_shared<const CurvedMesh>(affine, domain, r);
    const LiftMap lift(curved, LiftVariant::Modified);

    double plain = 0.0;
    for (int c = 0; c < curved->n_cells(); ++c)
      for (int q = 0; q < rule.size(); ++q)
        plain += rule.weights[q] * curved->map(c, rule.point_ref(q)).jdet;
    const double lifted = lifted_measure(lift);
    report.hs.push_back(base.h);
    report.plain_gap.push_back(std::abs(plain - exact));
    report.lifted_gap.push_back(std::abs(lifted - exact));
  }
  report.plain_eoc = eoc(report.plain_gap, report.hs);
  report.superconvergent = r == 2 && report.plain_eoc.back() >= 3.5;
  return report;
}

} // namespace cfem
