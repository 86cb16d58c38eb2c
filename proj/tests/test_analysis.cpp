#include <doctest.h>

#include <cmath>
#include <sstream>

#include "curvefem/analysis.hpp"
#include "curvefem/errors.hpp"
#include "curvefem/solver.hpp"
#include "support/oracles.hpp"

using namespace cfem;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("pairwise orders and least-squares slope") {
  CHECK(eoc({1.0, 0.25}, {1.0, 0.5}).front() == doctest::Approx(2.0));
  CHECK(eoc({1.0, 1.0}, {1.0, 0.5}).front() == doctest::Approx(0.0).scale(1.0));

  // synthetic e = C h^3.5 over four levels
  std::vector<double> hs{0.4, 0.2, 0.1, 0.05}, errs;
  for (double h : hs) errs.push_back(2.7 * std::pow(h, 3.5));
  for (double order : eoc(errs, hs)) CHECK(order == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(eoc_slope(errs, hs) == doctest::Approx(3.5).epsilon(1e-10));

  CHECK_THROWS_AS(eoc({1.0, 1e-15}, {1.0, 0.5}), ZeroError);
  CHECK_THROWS_AS(eoc({1.0, 0.5}, {0.5, 1.0}), Error); // increasing h
}

TEST_CASE("lifted norms of known functions on the disk") {
  // u = 1, u_h = 0: the norms are the measures of the domain and boundary
  const auto domain = unit_disk();
  auto mesh = std::make_shared<const CurvedMesh>(
      std::make_shared<const AffineMesh>(generate_disk_mesh(3)), domain, 2);
  const FESpace space(mesh, 2);
  const LiftMap lift(mesh, LiftVariant::Modified);

  ProblemSpec spec;
  spec.exact_u = [](const Vec3&) { return 1.0; };
  spec.exact_grad_u = [](const Vec3&) { return Vec3{0, 0, 0}; };
  const std::vector<double> zero(space.n_dofs(), 0.0);
  const ErrorRecord rec = lifted_errors(space, zero, spec, lift);
  CHECK(rec.e_L2_bulk == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
  CHECK(rec.e_L2_surf == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-10));
  CHECK(rec.e_H1semi_bulk <= 1e-12);
  CHECK(rec.e_H1semi_surf <= 1e-12);

  // interpolants of polynomials of degree <= k are reproduced
  auto square = std::make_shared<const CurvedMesh>(
      std::make_shared<const AffineMesh>(generate_square_mesh(3)), nullptr, 1);
  const FESpace sq_space(square, 3);
  const LiftMap sq_lift(square, LiftVariant::Modified);
  ProblemSpec poly;
  poly.exact_u = [](const Vec3& p) { return std::pow(p[0] + 0.3 * p[1] + 0.2, 3.0); };
  poly.exact_grad_u = [](const Vec3& p) {
    const double b = 3.0 * std::pow(p[0] + 0.3 * p[1] + 0.2, 2.0);
    return Vec3{b, 0.3 * b, 0};
  };
  const auto coeffs = sq_space.interpolate(poly.exact_u);
  const ErrorRecord prec = lifted_errors(sq_space, coeffs, poly, sq_lift);
  CHECK(prec.e_L2_bulk <= 1e-10);
  CHECK(prec.e_H1semi_bulk <= 1e-10);
}

TEST_CASE("measure identity: lifted volume matches the analytic measure") {
  for (const std::string domain : {"disk", "flower"}) {
    for (int r : {1, 2, 3}) {
      const GeometricErrorReport report = geometric_error_study(domain, r, 2);
      for (double gap : report.lifted_gap) CHECK(gap <= 1e-10);
    }
  }
}

TEST_CASE("geometric error study: plain measure converges at the expected rates") {
  const GeometricErrorReport disk1 = geometric_error_study("disk", 1, 4);
  CHECK(disk1.plain_eoc.back() == doctest::Approx(2.0).epsilon(0.1));

  // quadratic meshes: the measure defect superconverges (h^4 instead of h^3)
  const GeometricErrorReport disk2 = geometric_error_study("disk", 2, 4);
  CHECK(disk2.plain_eoc.back() >= 3.5);
  CHECK(disk2.superconvergent);
}

TEST_CASE("run_study smoke: affine ventcel disk at P1") {
  const StudyReport report = run_study("ventcel-disk", 1, 1, 3);
  CHECK(report.records.size() == 3);
  for (std::size_t i = 1; i < report.records.size(); ++i) {
    // error monotonicity in every recorded norm
    for (int which = 0; which < 4; ++which)
      CHECK(report.records[i].norm(which) < report.records[i - 1].norm(which));
  }
  CHECK(report.finest_order(2) == doctest::Approx(2.0).epsilon(0.15)); // L2 on the boundary
  CHECK(report.finest_order(3) == doctest::Approx(1.0).epsilon(0.2));  // H1 on the boundary
}

TEST_CASE("csv output: header and 16-digit round trip") {
  StudyReport report;
  report.problem = "ventcel-disk";
  ErrorRecord rec;
  rec.h = 1.0 / 3.0;
  rec.n_dofs = 42;
  rec.e_L2_bulk = kPi * 1e-3;
  rec.e_H1semi_bulk = 0.1234567890123456;
  rec.e_L2_surf = 7.0;
  rec.e_H1semi_surf = 1e-12;
  report.records.push_back(rec);

  std::ostringstream out;
  write_study_csv(report, out);
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  CHECK(header == std::string(kStudyCsvHeader));
  std::getline(in, row);
  double h, a, b, c, d;
  int nd;
  CHECK(std::sscanf(row.c_str(), "%lf,%d,%lf,%lf,%lf,%lf", &h, &nd, &a, &b, &c, &d) == 6);
  CHECK(h == doctest::Approx(rec.h).epsilon(1e-15));
  CHECK(a == doctest::Approx(rec.e_L2_bulk).epsilon(1e-15));
  CHECK(b == doctest::Approx(rec.e_H1semi_bulk).epsilon(1e-15));
  CHECK(d == doctest::Approx(rec.e_H1semi_surf).epsilon(1e-15));
}

TEST_CASE("markdown tables carry the mesh-degree rows and P columns") {
  StudyReport report;
  report.problem = "ventcel-disk";
  report.r = 2;
  report.k = 3;
  ErrorRecord r1, r2;
  r1.h = 0.2;
  r2.h = 0.1;
  r1.e_L2_bulk = 1e-3;
  r2.e_L2_bulk = 1e-3 / 16.0;
  r1.e_H1semi_bulk = 1e-2;
  r2.e_H1semi_bulk = 1e-2 / 8.0;
  r1.e_L2_surf = 1e-3;
  r2.e_L2_surf = 1e-3 / 16.0;
  r1.e_H1semi_surf = 1e-2;
  r2.e_H1semi_surf = 1e-2 / 8.0;
  report.records = {r1, r2};
  report.eoc[0].valid = true;
  report.eoc[0].pairwise = {4.0};
  report.eoc[1].valid = true;
  report.eoc[1].pairwise = {3.0};
  report.eoc[2].valid = true;
  report.eoc[2].pairwise = {4.0};
  report.eoc[3].valid = true;
  report.eoc[3].pairwise = {3.0};

  const std::string md = eoc_markdown_tables("ventcel-disk", {report});
  CHECK(md.find("Quadratic mesh (r=2)") != std::string::npos);
  CHECK(md.find("P3") != std::string::npos);
  CHECK(md.find("4.00") != std::string::npos);
  CHECK(md.find("L2(Omega)") != std::string::npos);
}
