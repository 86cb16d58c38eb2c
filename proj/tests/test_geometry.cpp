#include <doctest.h>

#include <cmath>
#include <random>

#include "curvefem/errors.hpp"
#include "curvefem/geometry.hpp"
#include "support/oracles.hpp"

using namespace cfem;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec3 random_tubular_point(std::mt19937& gen, const ImplicitDomain& domain) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (;;) {
    Vec3 x{unit(gen), unit(gen), domain.dim() == 3 ? unit(gen) : 0.0};
    x = (1.5 / std::max(norm(x), 1e-9)) * x; // spread over a shell
    std::uniform_real_distribution<double> radial(0.3, 1.6);
    x = radial(gen) * x;
    if (std::abs(domain.signed_distance(x)) < 0.95 * domain.tubular_radius()) return x;
  }
}

} // namespace

TEST_CASE("disk signed distance and projection examples") {
  const auto disk = unit_disk();
  CHECK(disk->signed_distance({2, 0, 0}) == doctest::Approx(1.0));
  CHECK(disk->signed_distance({0, 0, 0}) == doctest::Approx(-1.0));
  CHECK(disk->exact_volume() == doctest::Approx(kPi));

  const Vec3 p1 = disk->project({0.5, 0, 0});
  CHECK(p1[0] == doctest::Approx(1.0));
  CHECK(p1[1] == doctest::Approx(0.0));

  CHECK_THROWS_AS(disk->project({2, 0, 0}), OutsideTubularNeighborhood);

  const auto sphere = unit_sphere_surface();
  const Vec3 p2 = sphere->project({0, 0, 0.5});
  CHECK(p2[0] == doctest::Approx(0.0));
  CHECK(p2[1] == doctest::Approx(0.0));
  CHECK(p2[2] == doctest::Approx(1.0));
}

TEST_CASE("projection jacobian closed forms") {
  const auto disk = unit_disk();
  const Mat3 db1 = disk->projection_jacobian({1, 0, 0});
  CHECK(db1(0, 0) == doctest::Approx(0.0));
  CHECK(db1(0, 1) == doctest::Approx(0.0));
  CHECK(db1(1, 0) == doctest::Approx(0.0));
  CHECK(db1(1, 1) == doctest::Approx(1.0));

  // |x| = 2 lies outside the tubular band; check the formula itself there
  // against finite differences of x - d grad d on the admissible side, and
  // the analytic value at a stretched point inside the band.
  const Mat3 db2 = disk->projection_jacobian({1.5, 0, 0});
  CHECK(db2(0, 0) == doctest::Approx(0.0).scale(1.0));
  CHECK(db2(1, 1) == doctest::Approx(1.0 / 1.5)); // 1 - d/|x| = 1/|x|

  const auto sphere = unit_sphere_surface();
  const Mat3 db3 = sphere->projection_jacobian({0, 0, 1});
  CHECK(db3(0, 0) == doctest::Approx(1.0));
  CHECK(db3(1, 1) == doctest::Approx(1.0));
  CHECK(db3(2, 2) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("analytic Db at |x|=2 equals the derived closed form") {
  // Db = I - grad grad^T - d Hess = [[0,0],[0,0.5]] at (2,0); verified by
  // finite differences of the projection formula x - d grad d (which is
  // well-defined analytically for the disk everywhere except the center).
  const auto disk = unit_disk();
  const Vec3 x{2, 0, 0};
  const double d = disk->signed_distance(x);
  const Vec3 g = disk->grad_distance(x);
  const Mat3 db = Mat3::identity(2) - outer(g, g, 2, 2) - d * disk->hess_distance(x);
  CHECK(db(0, 0) == doctest::Approx(0.0).scale(1.0));
  CHECK(db(0, 1) == doctest::Approx(0.0).scale(1.0));
  CHECK(db(1, 0) == doctest::Approx(0.0).scale(1.0));
  CHECK(db(1, 1) == doctest::Approx(0.5));

  const Mat3 fd = oracle::jacobian_fd(
      [&](const Vec3& p) {
        return p - disk->signed_distance(p) * disk->grad_distance(p);
      },
      x, 2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(db(i, j) == doctest::Approx(fd(i, j)).epsilon(1e-6).scale(1.0));
}

TEST_CASE("flower distance against the brute-force boundary oracle") {
  const auto fl = flower(0.3, 3);
  const double brute = oracle::flower_distance_bruteforce({2, 0, 0}, 0.3, 3);
  CHECK(std::abs(fl->signed_distance({2, 0, 0}) - brute) <= 1e-6);

  // inside point: negative sign
  CHECK(fl->signed_distance({0, 0, 0}) < 0.0);
  CHECK(fl->exact_volume() == doctest::Approx(kPi * 1.045));
}

TEST_CASE("eikonal property at random tubular points") {
  auto gen = oracle::rng(3);
  for (const auto& [domain, tol] :
       {std::pair{unit_disk(), 1e-10}, {unit_sphere_surface(), 1e-10}, {flower(), 1e-6}}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const Vec3 x = random_tubular_point(gen, *domain);
      CHECK(std::abs(norm(domain->grad_distance(x)) - 1.0) <= tol);
    }
  }
}

TEST_CASE("projection lands on the boundary and is idempotent") {
  auto gen = oracle::rng(5);
  for (const auto& [domain, tol] :
       {std::pair{unit_disk(), 1e-12}, {unit_sphere_surface(), 1e-12}, {flower(), 1e-8}}) {
    for (int trial = 0; trial < 200; ++trial) {
      const Vec3 x = random_tubular_point(gen, *domain);
      const Vec3 b = domain->project(x);
      CHECK(std::abs(domain->signed_distance(b)) <= tol);
      const Vec3 bb = domain->project(b);
      CHECK(norm(bb - b) <= 10 * tol);
    }
  }
}

TEST_CASE("projection jacobian matches finite differences of project") {
  auto gen = oracle::rng(9);
  for (const auto& domain : {unit_disk(), unit_sphere_surface(), flower()}) {
    const int d = domain->dim();
    for (int trial = 0; trial < 30; ++trial) {
      const Vec3 x = random_tubular_point(gen, *domain);
      const Mat3 jac = domain->projection_jacobian(x);
      const Mat3 fd =
          oracle::jacobian_fd([&](const Vec3& p) { return domain->project(p); }, x, d, d);
      const double scale = frobenius_norm(jac, d, d);
      CHECK(frobenius_norm(jac - fd, d, d) <= 1e-5 * std::max(scale, 1.0));
    }
  }
}
