#include <doctest.h>

#include <cmath>
#include <random>

#include "curvefem/analysis.hpp"
#include "curvefem/errors.hpp"
#include "curvefem/solver.hpp"
#include "support/oracles.hpp"

using namespace cfem;

namespace {

std::shared_ptr<const CurvedMesh> polygon_mesh(const AffineMesh& mesh) {
  return std::make_shared<const CurvedMesh>(std::make_shared<const AffineMesh>(mesh), nullptr, 1);
}

AffineMesh unit_right_triangle() {
  AffineMesh tri;
  tri.ambient_dim = 2;
  tri.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  tri.cells = {{0, 1, 2}};
  tri.boundary_vertex = {1, 1, 1};
  tri.boundary_faces = {{0, 0}, {0, 1}, {0, 2}};
  tri.h = std::sqrt(2.0);
  return tri;
}

std::shared_ptr<const CurvedMesh> disk_mesh(int rings, int r) {
  const auto domain = unit_disk();
  return std::make_shared<const CurvedMesh>(
      std::make_shared<const AffineMesh>(generate_disk_mesh(rings)), domain, r);
}

} // namespace

TEST_CASE("dof counts: lattice formula against entity counts") {
  auto tri = polygon_mesh(unit_right_triangle());
  CHECK(FESpace(tri, 1).n_dofs() == 3);
  CHECK(FESpace(tri, 3).n_dofs() == 10);

  auto mesh = disk_mesh(3, 2);
  const auto topo = build_edges(mesh->affine());
  const int v = mesh->affine().n_vertices();
  const int e = static_cast<int>(topo.edges.size());
  const int f = mesh->affine().n_cells();
  for (int k = 1; k <= 4; ++k) {
    const FESpace space(mesh, k);
    CHECK(space.n_dofs() == v + (k - 1) * e + (k - 1) * (k - 2) / 2 * f);
  }
}

TEST_CASE("fe functions are continuous across shared faces") {
  auto gen = oracle::rng(17);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  for (bool sphere : {false, true}) {
    std::shared_ptr<const CurvedMesh> mesh;
    if (sphere) {
      mesh = std::make_shared<const CurvedMesh>(
          std::make_shared<const AffineMesh>(generate_sphere_surface_mesh(1)),
          unit_sphere_surface(), 2);
    } else {
      mesh = disk_mesh(2, 2);
    }
    const FESpace space(mesh, 3);
    std::vector<double> coeffs(space.n_dofs());
    for (double& c : coeffs) c = dist(gen);

    const auto topo = build_edges(mesh->affine());
    int tested = 0;
    for (std::size_t e = 0; e < topo.edges.size() && tested < 40; ++e) {
      if (topo.edge_cells[e][1] == -1) continue;
      const int ca = topo.edge_cells[e][0], cb = topo.edge_cells[e][1];
      int lea = -1, leb = -1;
      for (int le = 0; le < 3; ++le) {
        if (topo.cell_edges[ca][le] == static_cast<int>(e)) lea = le;
        if (topo.cell_edges[cb][le] == static_cast<int>(e)) leb = le;
      }
      // orient both traversals from the smaller global vertex
      const auto align = [&](int cell, int le, double t) {
        const int a = mesh->affine().cells[cell][(le + 1) % 3];
        const int b = mesh->affine().cells[cell][(le + 2) % 3];
        return a < b ? t : 1.0 - t;
      };
      for (double t : {0.2, 0.5, 0.8}) {
        const auto va = space.eval(coeffs, ca, edge_point_ref(lea, align(ca, lea, t)));
        const auto vb = space.eval(coeffs, cb, edge_point_ref(leb, align(cb, leb, t)));
        CHECK(std::abs(va.value - vb.value) <= 1e-12);
      }
      ++tested;
    }
    CHECK(tested > 0);
  }
}

TEST_CASE("P1 stiffness and mass blocks on the unit right triangle") {
  auto tri = polygon_mesh(unit_right_triangle());
  const FESpace space(tri, 1);
  const LiftMap lift(tri, LiftVariant::Modified);

  ProblemSpec spec;
  spec.kappa = 1.0;
  spec.alpha = 0.0;
  spec.beta = 0.0;
  const LinearSystem sys = assemble_ventcel(space, spec, lift);

  // K = 1/2 [[2,-1,-1],[-1,1,0],[-1,0,1]], M = (area/12) [[2,1,1],[1,2,1],[1,1,2]]
  const double k_ref[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
  const double m_scale = 0.5 / 12.0;
  const double m_ref[3][3] = {{2 * m_scale, m_scale, m_scale},
                              {m_scale, 2 * m_scale, m_scale},
                              {m_scale, m_scale, 2 * m_scale}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(sys.matrix.get(i, j) == doctest::Approx(k_ref[i][j] + m_ref[i][j]).epsilon(1e-13));

  // zero sources give a zero right-hand side
  spec.f = [](const Vec3&) { return 0.0; };
  spec.g = [](const Vec3&) { return 0.0; };
  const LinearSystem zero_sys = assemble_ventcel(space, spec, lift);
  for (double v : zero_sys.rhs) CHECK(v == 0.0);
}

TEST_CASE("gradient terms annihilate constants: A*1 equals the boundary mass action") {
  auto mesh = disk_mesh(2, 2);
  const FESpace space(mesh, 2);
  const LiftMap lift(mesh, LiftVariant::Modified);
  ProblemSpec spec;
  spec.kappa = 0.0;
  spec.alpha = 1.0;
  spec.beta = 4.7;
  const LinearSystem sys = assemble_ventcel(space, spec, lift);

  std::vector<double> ones(space.n_dofs(), 1.0), result(space.n_dofs());
  sys.matrix.matvec(ones.data(), result.data());

  // independent boundary-mass integration of each shape function
  std::vector<double> boundary_mass(space.n_dofs(), 0.0);
  const QuadratureRule line = quadrature(1, surface_quadrature_order(2, 2));
  const Vec3 vref[3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  for (const auto& [c, le] : mesh->affine().boundary_faces) {
    const Vec3 eref = vref[(le + 2) % 3] - vref[(le + 1) % 3];
    for (int q = 0; q < line.size(); ++q) {
      const Vec3 xref = edge_point_ref(le, line.points[q][1]);
      const MapEval me = mesh->map(c, xref);
      const double arc = norm(matvec(me.jacobian, eref, 2, 2));
      const auto values = space.basis().eval(xref);
      for (int i = 0; i < space.n_local(); ++i)
        boundary_mass[space.global_dof(c, i)] += line.weights[q] * arc * values[i];
    }
  }
  for (int i = 0; i < space.n_dofs(); ++i)
    CHECK(result[i] == doctest::Approx(boundary_mass[i]).epsilon(1e-11).scale(1.0));
}

TEST_CASE("patch test: polynomial solutions reproduced on a polygonal mesh") {
  auto mesh = polygon_mesh(generate_square_mesh(4));
  const LiftMap lift(mesh, LiftVariant::Modified);

  for (int k = 1; k <= 4; ++k) {
    const FESpace space(mesh, k);
    const double kd = k;
    ProblemSpec spec;
    spec.kappa = 1.0;
    spec.alpha = 1.0;
    spec.beta = 0.0; // Robin analogue: the square boundary has corners
    spec.exact_u = [kd](const Vec3& p) { return std::pow(p[0] + 0.5 * p[1] + 0.3, kd); };
    spec.exact_grad_u = [kd](const Vec3& p) {
      const double base = kd * std::pow(p[0] + 0.5 * p[1] + 0.3, kd - 1);
      return Vec3{base, 0.5 * base, 0.0};
    };
    spec.f = [kd](const Vec3& p) {
      const double lap =
          kd * (kd - 1) * std::pow(p[0] + 0.5 * p[1] + 0.3, kd - 2) * (1.0 + 0.25);
      return -lap + std::pow(p[0] + 0.5 * p[1] + 0.3, kd);
    };
    spec.g = [&spec](const Vec3& p) {
      Vec3 n{0, 0, 0};
      if (p[0] < 1e-12) n = {-1, 0, 0};
      else if (p[0] > 1.0 - 1e-12) n = {1, 0, 0};
      else if (p[1] < 1e-12) n = {0, -1, 0};
      else n = {0, 1, 0};
      return dot(spec.exact_grad_u(p), n) + spec.exact_u(p);
    };

    const LinearSystem sys = assemble_ventcel(space, spec, lift);
    CHECK(sys.matrix.symmetry_gap() <= 1e-12 * sys.matrix.max_abs());
    const auto [coeffs, report] = solve_cg(sys.matrix, sys.rhs, 1e-14, 40 * space.n_dofs());

    // galerkin consistency
    std::vector<double> residual(space.n_dofs());
    sys.matrix.matvec(coeffs.data(), residual.data());
    double rnorm = 0.0, bnorm = 0.0;
    for (int i = 0; i < space.n_dofs(); ++i) {
      rnorm += (residual[i] - sys.rhs[i]) * (residual[i] - sys.rhs[i]);
      bnorm += sys.rhs[i] * sys.rhs[i];
    }
    CHECK(std::sqrt(rnorm) <= 1e-13 * std::sqrt(bnorm));

    const ErrorRecord rec = lifted_errors(space, coeffs, spec, lift);
    CHECK(rec.e_L2_bulk <= 1e-10);
    CHECK(rec.e_H1semi_bulk <= 1e-9);
  }
}

TEST_CASE("assembled systems are symmetric positive definite") {
  auto gen = oracle::rng(23);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  auto mesh = disk_mesh(2, 2);
  const FESpace space(mesh, 2);
  const LiftMap lift(mesh, LiftVariant::Modified);
  const LinearSystem sys = assemble_ventcel(space, ventcel_disk_problem(), lift);
  CHECK(sys.matrix.symmetry_gap() <= 1e-12 * sys.matrix.max_abs());

  std::vector<double> x(space.n_dofs()), ax(space.n_dofs());
  for (int trial = 0; trial < 100; ++trial) {
    for (double& v : x) v = dist(gen);
    sys.matrix.matvec(x.data(), ax.data());
    double quad = 0.0;
    for (int i = 0; i < space.n_dofs(); ++i) quad += x[i] * ax[i];
    CHECK(quad > 0.0);
  }

  auto sphere_mesh = std::make_shared<const CurvedMesh>(
      std::make_shared<const AffineMesh>(generate_sphere_surface_mesh(1)), unit_sphere_surface(),
      1);
  const FESpace wspace(sphere_mesh, 2);
  const LinearSystem ssys = assemble_surface_laplace(wspace, sphere_laplace_problem().g);
  CHECK(ssys.matrix.symmetry_gap() <= 1e-12 * ssys.matrix.max_abs());
  std::vector<double> y(wspace.n_dofs()), ay(wspace.n_dofs());
  for (int trial = 0; trial < 100; ++trial) {
    for (double& v : y) v = dist(gen);
    ssys.matrix.matvec(y.data(), ay.data());
    double quad = 0.0;
    for (int i = 0; i < wspace.n_dofs(); ++i) quad += y[i] * ay[i];
    CHECK(quad > 0.0);
  }
}

TEST_CASE("surface laplace with constant source: deviation from 1 shrinks like h^2") {
  // with g = 1 the exact solution is 1; the discrete solution differs by the
  // geometric consistency error J_b - 1 = O(h^2), not by solver error alone
  const auto domain = unit_sphere_surface();
  std::vector<double> gaps, hs;
  for (int level : {1, 2, 3}) {
    auto mesh = std::make_shared<const CurvedMesh>(
        std::make_shared<const AffineMesh>(generate_sphere_surface_mesh(level)), domain, 1);
    const FESpace space(mesh, 1);
    const LinearSystem sys = assemble_surface_laplace(space, [](const Vec3&) { return 1.0; });
    const auto [coeffs, report] = solve_cg(sys.matrix, sys.rhs);
    double dev = 0.0;
    for (double c : coeffs) dev = std::max(dev, std::abs(c - 1.0));
    gaps.push_back(dev);
    hs.push_back(mesh->affine().h);
  }
  CHECK(gaps[0] <= 0.15);
  const auto orders = eoc(gaps, hs);
  CHECK(orders.back() >= 1.5);
}

TEST_CASE("eval_fe_function: interpolation exactness and FD gradient") {
  // degree-k polynomial reproduced on an affine (polygonal) mesh
  auto square = polygon_mesh(generate_square_mesh(3));
  for (int k : {1, 3}) {
    const FESpace space(square, k);
    const double kd = k;
    const auto u = [kd](const Vec3& p) { return std::pow(0.7 * p[0] - 0.4 * p[1] + 0.5, kd); };
    const auto coeffs = space.interpolate(u);
    auto gen = oracle::rng(k);
    std::uniform_real_distribution<double> dist(0.05, 0.85);
    for (int trial = 0; trial < 20; ++trial) {
      double a = dist(gen), b = dist(gen);
      if (a + b > 0.9) {
        a *= 0.5;
        b *= 0.5;
      }
      const int cell = trial % square->n_cells();
      const auto fe = space.eval(coeffs, cell, {a, b, 0});
      const Vec3 x = square->map_point(cell, {a, b, 0});
      CHECK(fe.value == doctest::Approx(u(x)).epsilon(1e-12));
      if (k == 1) {
        // affine exactness of the gradient
        CHECK(fe.phys_grad[0] == doctest::Approx(0.7).epsilon(1e-13));
        CHECK(fe.phys_grad[1] == doctest::Approx(-0.4).epsilon(1e-13));
      }
    }
  }

  // curved cell: physical gradient against finite differences through the
  // inverse map
  auto mesh = disk_mesh(2, 2);
  const FESpace space(mesh, 2);
  const LiftMap lift(mesh, LiftVariant::Modified);
  const auto coeffs = space.interpolate(
      [](const Vec3& p) { return std::sin(p[0]) * std::exp(0.5 * p[1]); });
  for (const auto& [c, le] : mesh->affine().boundary_faces) {
    const Vec3 xref{0.25, 0.25, 0};
    const auto fe = space.eval(coeffs, c, xref);
    const Vec3 x = mesh->map_point(c, xref);
    const Vec3 fd = oracle::gradient_fd(
        [&](const Vec3& p) {
          return space.eval(coeffs, c, lift.inverse_ref_coords(c, p)).value;
        },
        x, 2, 1e-7);
    for (int d = 0; d < 2; ++d)
      CHECK(fe.phys_grad[d] == doctest::Approx(fd[d]).epsilon(1e-5).scale(1.0));
    break;
  }
}

TEST_CASE("quadrature order below the policy is rejected") {
  auto mesh = disk_mesh(1, 2);
  const FESpace space(mesh, 2);
  const LiftMap lift(mesh, LiftVariant::Modified);
  CHECK_THROWS_AS(assemble_ventcel(space, ventcel_disk_problem(), lift, 2, -1),
                  QuadratureOrderTooLow);
  CHECK_THROWS_AS(assemble_ventcel(space, ventcel_disk_problem(), lift, -1, 3),
                  QuadratureOrderTooLow);
}
