#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "curvefem/analysis.hpp"
#include "curvefem/errors.hpp"
#include "curvefem/mesh.hpp"
#include "support/oracles.hpp"

using namespace cfem;

namespace {

constexpr double kPi = 3.14159265358979323846;

double mesh_area(const AffineMesh& mesh) {
  double area = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Vec3 a = mesh.cell_vertex(c, 0);
    const Vec3 b = mesh.cell_vertex(c, 1);
    const Vec3 d = mesh.cell_vertex(c, 2);
    if (mesh.surface)
      area += 0.5 * norm(cross(b - a, d - a));
    else
      area += 0.5 * ((b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0]));
  }
  return area;
}

long count_edges(const AffineMesh& mesh) { return build_edges(mesh).edges.size(); }

} // namespace

TEST_CASE("disk mesh: boundary on the circle, no fully-boundary cell") {
  const auto domain = unit_disk();
  for (int n : {1, 2, 4}) {
    const AffineMesh mesh = generate_disk_mesh(n);
    validate_mesh(mesh, domain.get());
    for (int v = 0; v < mesh.n_vertices(); ++v)
      if (mesh.boundary_vertex[v]) CHECK(std::abs(norm(mesh.vertices[v]) - 1.0) <= 1e-14);
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const auto eps = mesh.cell_eps(c);
      CHECK(eps[0] + eps[1] + eps[2] <= 2);
    }
    CHECK(mesh.n_cells() == 6 * n * n);
  }
}

TEST_CASE("disk mesh area deficit behaves like h^2") {
  const auto domain = unit_disk();
  AffineMesh mesh = generate_disk_mesh(2);
  std::vector<double> gaps, hs;
  for (int level = 0; level < 4; ++level) {
    if (level > 0) mesh = refine(mesh, domain.get());
    const double area = mesh_area(mesh);
    CHECK(area < kPi);
    gaps.push_back(kPi - area);
    hs.push_back(mesh.h);
  }
  const auto orders = eoc(gaps, hs);
  CHECK(orders.back() == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("successive ring resolutions roughly halve h") {
  const double h1 = generate_disk_mesh(2).h;
  const double h2 = generate_disk_mesh(4).h;
  CHECK(h2 / h1 == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("sphere mesh: counts, Euler characteristic, area") {
  const auto domain = unit_sphere_surface();
  const AffineMesh ico = generate_sphere_surface_mesh(0);
  CHECK(ico.n_vertices() == 12);
  CHECK(ico.n_cells() == 20);
  CHECK(ico.n_vertices() - count_edges(ico) + ico.n_cells() == 2);

  const AffineMesh l2 = generate_sphere_surface_mesh(2);
  CHECK(l2.n_cells() == 320);
  CHECK(l2.n_vertices() - count_edges(l2) + l2.n_cells() == 2);
  validate_mesh(l2, domain.get());

  std::vector<double> gaps, hs;
  for (int level = 1; level <= 4; ++level) {
    const AffineMesh mesh = generate_sphere_surface_mesh(level);
    gaps.push_back(4.0 * kPi - mesh_area(mesh));
    hs.push_back(mesh.h);
    CHECK(gaps.back() > 0.0);
  }
  const auto orders = eoc(gaps, hs);
  CHECK(orders.back() == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("flower mesh: boundary on the curve, area oracle") {
  const auto domain = flower();
  AffineMesh mesh = generate_flower_mesh(3);
  validate_mesh(mesh, domain.get());

  // polar area oracle: (1/2) integral of r(t)^2 by high-order quadrature
  const QuadratureRule line = quadrature(1, 20);
  double area_exact = 0.0;
  const int panels = 64;
  for (int p = 0; p < panels; ++p)
    for (int q = 0; q < line.size(); ++q) {
      const double t = 2.0 * kPi * (p + line.points[q][1]) / panels;
      const double r = 1.0 + 0.3 * std::sin(3.0 * t);
      area_exact += 0.5 * r * r * line.weights[q] * 2.0 * kPi / panels;
    }
  CHECK(area_exact == doctest::Approx(domain->exact_volume()).epsilon(1e-12));

  std::vector<double> gaps, hs;
  for (int level = 0; level < 4; ++level) {
    if (level > 0) mesh = refine(mesh, domain.get());
    gaps.push_back(std::abs(domain->exact_volume() - mesh_area(mesh)));
    hs.push_back(mesh.h);
  }
  const auto orders = eoc(gaps, hs);
  CHECK(orders.back() == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("quasi-uniformity proxy stays bounded for the built-in generators") {
  const auto disk = unit_disk();
  AffineMesh mesh = generate_disk_mesh(3);
  for (int level = 0; level < 3; ++level) {
    if (level > 0) mesh = refine(mesh, disk.get());
    CHECK(max_min_diameter_ratio(mesh) < 5.0);
  }
  CHECK(max_min_diameter_ratio(generate_flower_mesh(3)) < 5.0);
  CHECK(max_min_diameter_ratio(generate_sphere_surface_mesh(2)) < 5.0);
}

TEST_CASE("classification by boundary vertex count") {
  const AffineMesh mesh = generate_disk_mesh(2);
  int internal = 0, boundary = 0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto eps = mesh.cell_eps(c);
    const int count = eps[0] + eps[1] + eps[2];
    const CellClass cls = classify(mesh, c);
    if (count >= 2) {
      CHECK(cls == CellClass::Boundary);
      ++boundary;
    } else {
      CHECK(cls == CellClass::Internal); // includes one-vertex-on-boundary cells
      ++internal;
    }
  }
  CHECK(internal > 0);
  CHECK(boundary > 0);

  const AffineMesh sphere = generate_sphere_surface_mesh(0);
  for (int c = 0; c < sphere.n_cells(); ++c) CHECK(classify(sphere, c) == CellClass::Boundary);
}

TEST_CASE("exact map: interior identity, boundary face lands on the circle") {
  const auto domain = unit_disk();
  const AffineMesh mesh = generate_disk_mesh(2);
  for (int r : {1, 2, 3}) {
    for (int c = 0; c < mesh.n_cells(); ++c) {
      if (classify(mesh, c) == CellClass::Internal) {
        const Vec3 xref{0.21, 0.37, 0};
        CHECK(norm(exact_map(mesh, *domain, c, xref, r) - mesh.affine_map(c, xref)) == 0.0);
      }
    }
    for (const auto& [c, le] : mesh.boundary_faces) {
      for (double t : {0.0, 0.31, 0.5, 0.77, 1.0}) {
        const Vec3 xref = edge_point_ref(le, t);
        const Vec3 mapped = exact_map(mesh, *domain, c, xref, r);
        CHECK(std::abs(norm(mapped) - 1.0) <= 1e-12);
        // matches project(F_T) pointwise on the boundary face
        CHECK(norm(mapped - domain->project(mesh.affine_map(c, xref))) <= 1e-12);
      }
      // vertex opposite the boundary face: correction vanishes
      Bary lam{0, 0, 0, 0};
      lam[le] = 1.0;
      const Vec3 vref = bary_to_ref(lam, 2);
      CHECK(norm(exact_map(mesh, *domain, c, vref, r) - mesh.affine_map(c, vref)) <= 1e-15);
    }
  }
}

TEST_CASE("elevate: control points, boundary nodes on the zero set") {
  const auto domain = unit_disk();
  auto affine = std::make_shared<const AffineMesh>(generate_disk_mesh(2));

  const CurvedMesh flat(affine, domain, 1);
  for (int c = 0; c < flat.n_cells(); ++c)
    for (int i = 0; i < 3; ++i) {
      // r = 1 control points are a permutation-free copy of the vertices
      bool matches_vertex = false;
      for (int v = 0; v < 3; ++v)
        if (norm(flat.control_points(c)[i] - affine->cell_vertex(c, v)) == 0.0)
          matches_vertex = true;
      CHECK(matches_vertex);
    }

  const CurvedMesh quad(affine, domain, 2);
  for (const auto& [c, le] : affine->boundary_faces) {
    // the midpoint node of the boundary edge has multi-index 0 on `le`
    const auto& nodes = quad.geometry_basis().nodes();
    for (int i = 0; i < quad.geometry_basis().size(); ++i)
      if (nodes[i][le] == 0.0 && nodes[i][(le + 1) % 3] == 0.5)
        CHECK(std::abs(norm(quad.control_points(c)[i]) - 1.0) <= 1e-12);
  }

  // control points reproduce the exact map at the lattice nodes
  const CurvedMesh cubic(affine, domain, 3);
  for (int c = 0; c < cubic.n_cells(); ++c)
    for (int i = 0; i < cubic.geometry_basis().size(); ++i) {
      const Vec3 expected = exact_map(*affine, *domain, c, cubic.geometry_basis().node_ref(i), 3);
      CHECK(norm(cubic.control_points(c)[i] - expected) == 0.0);
    }
}

TEST_CASE("boundary gap of the curved mesh decays like h^{r+1}") {
  const auto domain = unit_disk();
  for (int r : {1, 2, 3}) {
    AffineMesh mesh = generate_disk_mesh(2);
    std::vector<double> gaps, hs;
    for (int level = 0; level < 3; ++level) {
      if (level > 0) mesh = refine(mesh, domain.get());
      const CurvedMesh curved(std::make_shared<const AffineMesh>(mesh), domain, r);
      gaps.push_back(curved.max_boundary_distance());
      hs.push_back(mesh.h);
    }
    const auto orders = eoc(gaps, hs);
    CHECK(orders.back() >= r + 0.8);
  }
}

TEST_CASE("geometric map: affine case, node interpolation, FD jacobian") {
  const auto domain = unit_disk();
  auto affine = std::make_shared<const AffineMesh>(generate_disk_mesh(2));
  const CurvedMesh curved(affine, domain, 2);

  // affine cells: constant jacobian equal to the affine one
  for (int c = 0; c < curved.n_cells(); ++c) {
    if (curved.cell_class(c) != CellClass::Internal) continue;
    const MapEval m1 = curved.map(c, {0.1, 0.1, 0});
    const MapEval m2 = curved.map(c, {0.5, 0.3, 0});
    const Mat3 ja = affine->affine_jacobian(c);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        CHECK(m1.jacobian(i, j) == doctest::Approx(ja(i, j)).epsilon(1e-12).scale(1.0));
        CHECK(m2.jacobian(i, j) == doctest::Approx(ja(i, j)).epsilon(1e-12).scale(1.0));
      }
    break;
  }

  // the map reproduces the control point at each Lagrange node
  for (int c : {0, curved.n_cells() / 2}) {
    for (int i = 0; i < curved.geometry_basis().size(); ++i) {
      const Vec3 x = curved.map_point(c, curved.geometry_basis().node_ref(i));
      CHECK(norm(x - curved.control_points(c)[i]) <= 1e-14);
    }
  }

  // curved boundary cell: jacobian matches finite differences
  for (const auto& [c, le] : affine->boundary_faces) {
    const Vec3 xref{0.3, 0.3, 0};
    const MapEval me = curved.map(c, xref);
    const Mat3 fd = oracle::jacobian_fd(
        [&](const Vec3& p) { return curved.map_point(c, p); }, xref, 2, 2);
    CHECK(frobenius_norm(me.jacobian - fd, 2, 2) <= 1e-6 * frobenius_norm(me.jacobian, 2, 2));
    break;
  }

  // positive jacobian at all quadrature points of all cells
  const QuadratureRule rule = quadrature(2, 8);
  for (int r : {1, 2, 3}) {
    const CurvedMesh cm(affine, domain, r);
    for (int c = 0; c < cm.n_cells(); ++c)
      for (int q = 0; q < rule.size(); ++q) CHECK(cm.map(c, rule.point_ref(q)).jdet > 0.0);
  }
}

TEST_CASE("refinement: counts, boundary placement, h halving") {
  const auto domain = unit_disk();
  const AffineMesh mesh = generate_disk_mesh(2);
  const AffineMesh fine = refine(mesh, domain.get());
  validate_mesh(fine, domain.get());
  CHECK(fine.n_cells() == 4 * mesh.n_cells());
  CHECK(fine.h == doctest::Approx(0.5 * mesh.h).epsilon(0.1));

  int coarse_boundary = 0, fine_boundary = 0;
  for (auto f : mesh.boundary_vertex) coarse_boundary += f;
  for (auto f : fine.boundary_vertex) fine_boundary += f;
  CHECK(fine_boundary == 2 * coarse_boundary);
  for (int v = 0; v < fine.n_vertices(); ++v)
    if (fine.boundary_vertex[v])
      CHECK(std::abs(domain->signed_distance(fine.vertices[v])) <= 1e-12);

  // single-triangle sanity
  AffineMesh tri;
  tri.ambient_dim = 2;
  tri.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  tri.cells = {{0, 1, 2}};
  tri.boundary_vertex = {1, 1, 1};
  tri.boundary_faces = {{0, 0}, {0, 1}, {0, 2}};
  tri.h = std::sqrt(2.0);
  CHECK(refine(tri, nullptr).n_cells() == 4);
}

TEST_CASE("msh 2.2 import with boundary snapping") {
  const auto domain = unit_disk();
  const AffineMesh mesh = generate_disk_mesh(2);

  // write a small MSH 2.2 file, perturbing boundary vertices slightly
  const std::string path = "test_disk.msh";
  {
    std::ofstream out(path);
    out.precision(17);
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n" << mesh.n_vertices() << "\n";
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      Vec3 p = mesh.vertices[v];
      if (mesh.boundary_vertex[v]) p = (1.0 + 1e-7) * p;
      out << v + 1 << " " << p[0] << " " << p[1] << " 0\n";
    }
    out << "$EndNodes\n$Elements\n" << mesh.n_cells() << "\n";
    for (int c = 0; c < mesh.n_cells(); ++c)
      out << c + 1 << " 2 2 0 1 " << mesh.cells[c][0] + 1 << " " << mesh.cells[c][1] + 1 << " "
          << mesh.cells[c][2] + 1 << "\n";
    out << "$EndElements\n";
  }

  double snap = 0.0;
  const AffineMesh imported = import_msh(path, domain, &snap);
  CHECK(imported.n_cells() == mesh.n_cells());
  CHECK(imported.n_vertices() == mesh.n_vertices());
  CHECK(snap > 0.0);
  CHECK(snap <= 2e-7);
  validate_mesh(imported, domain.get());
  std::remove(path.c_str());
}

TEST_CASE("vtk export writes a legacy ascii file") {
  const auto domain = unit_disk();
  const CurvedMesh curved(std::make_shared<const AffineMesh>(generate_disk_mesh(1)), domain, 2);
  const std::string path = "test_disk.vtk";
  export_vtk(curved, path);
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("# vtk DataFile", 0) == 0);
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(body.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  std::remove(path.c_str());
}
