#include <algorithm>
#include <cmath>
#include <map>

#include "curvefem/errors.hpp"
#include "curvefem/mesh.hpp"

namespace cfem {

namespace {

constexpr double kPi = 3.14159265358979323846;

void finalize_planar(AffineMesh& mesh) {
  // canonical orientation
  for (auto& cell : mesh.cells) {
    const Vec3 a = mesh.vertices[cell[0]];
    const Vec3 b = mesh.vertices[cell[1]];
    const Vec3 c = mesh.vertices[cell[2]];
    const double area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    if (area2 < 0.0) std::swap(cell[1], cell[2]);
  }
  const auto topo = build_edges(mesh);
  mesh.boundary_vertex.assign(mesh.n_vertices(), 0);
  mesh.boundary_faces.clear();
  for (std::size_t e = 0; e < topo.edges.size(); ++e) {
    if (topo.edge_cells[e][1] != -1) continue;
    const int c = topo.edge_cells[e][0];
    for (int le = 0; le < 3; ++le)
      if (topo.cell_edges[c][le] == static_cast<int>(e)) mesh.boundary_faces.emplace_back(c, le);
    mesh.boundary_vertex[topo.edges[e][0]] = 1;
    mesh.boundary_vertex[topo.edges[e][1]] = 1;
  }
  std::sort(mesh.boundary_faces.begin(), mesh.boundary_faces.end());
  mesh.h = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) mesh.h = std::max(mesh.h, mesh.cell_diameter(c));
}

/// One Laplacian pass: interior vertices move to the mean of their edge
/// neighbors, boundary vertices stay put.
void smooth_interior(AffineMesh& mesh, int passes) {
  for (int pass = 0; pass < passes; ++pass) {
    const auto topo = build_edges(mesh);
    std::vector<Vec3> sum(mesh.n_vertices(), Vec3{0, 0, 0});
    std::vector<int> count(mesh.n_vertices(), 0);
    for (const auto& e : topo.edges) {
      sum[e[0]] += mesh.vertices[e[1]];
      sum[e[1]] += mesh.vertices[e[0]];
      ++count[e[0]];
      ++count[e[1]];
    }
    for (int v = 0; v < mesh.n_vertices(); ++v)
      if (!mesh.boundary_vertex[v] && count[v] > 0) mesh.vertices[v] = (1.0 / count[v]) * sum[v];
    mesh.h = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) mesh.h = std::max(mesh.h, mesh.cell_diameter(c));
  }
}

AffineMesh ring_mesh(int n) {
  if (n < 1) throw MeshError("disk mesh needs at least one ring");
  AffineMesh mesh;
  mesh.ambient_dim = 2;
  mesh.vertices.push_back({0, 0, 0});
  std::vector<int> ring_start(n + 1, 0);
  for (int j = 1; j <= n; ++j) {
    ring_start[j] = mesh.n_vertices();
    const double radius = static_cast<double>(j) / n;
    for (int i = 0; i < 6 * j; ++i) {
      const double t = 2.0 * kPi * i / (6.0 * j);
      mesh.vertices.push_back({radius * std::cos(t), radius * std::sin(t), 0.0});
    }
  }
  for (int j = 1; j <= n; ++j) {
    const auto outer = [&](int p) { return ring_start[j] + (p % (6 * j)); };
    const auto inner = [&](int p) {
      return j == 1 ? 0 : ring_start[j - 1] + (p % (6 * (j - 1)));
    };
    for (int s = 0; s < 6; ++s) {
      for (int p = 0; p < j; ++p)
        mesh.cells.push_back({outer(s * j + p), outer(s * j + p + 1), inner(s * (j - 1) + p)});
      for (int p = 0; p + 1 < j; ++p)
        mesh.cells.push_back(
            {inner(s * (j - 1) + p), outer(s * j + p + 1), inner(s * (j - 1) + p + 1)});
    }
  }
  finalize_planar(mesh);
  return mesh;
}

} // namespace

AffineMesh generate_disk_mesh(int n) {
  AffineMesh mesh = ring_mesh(n);
  smooth_interior(mesh, 1);
  return mesh;
}

AffineMesh generate_flower_mesh(int n, double a, int m) {
  AffineMesh mesh = ring_mesh(n);
  for (auto& v : mesh.vertices) {
    const double phi = std::atan2(v[1], v[0]);
    const double scale = 1.0 + a * std::sin(m * phi);
    v = scale * v;
  }
  smooth_interior(mesh, 2);
  return mesh;
}

AffineMesh generate_square_mesh(int n) {
  if (n < 1) throw MeshError("square mesh needs n >= 1");
  AffineMesh mesh;
  mesh.ambient_dim = 2;
  const auto id = [&](int i, int j) { return i * (n + 1) + j; };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      mesh.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n, 0.0});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      mesh.cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  finalize_planar(mesh);
  return mesh;
}

AffineMesh generate_sphere_surface_mesh(int level) {
  if (level < 0) throw MeshError("sphere mesh level must be >= 0");
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
      {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1},  {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : verts) v = (1.0 / norm(v)) * v;
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int l = 0; l < level; ++l) {
    std::map<std::array<int, 2>, int> midpoint;
    const auto mid = [&](int a, int b) {
      std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = 0.5 * (verts[a] + verts[b]);
      m = (1.0 / norm(m)) * m;
      const int id = static_cast<int>(verts.size());
      verts.push_back(m);
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }

  AffineMesh mesh;
  mesh.ambient_dim = 3;
  mesh.surface = true;
  mesh.vertices = std::move(verts);
  // orient faces outward
  for (auto& f : faces) {
    const Vec3 centroid =
        (1.0 / 3.0) * (mesh.vertices[f[0]] + mesh.vertices[f[1]] + mesh.vertices[f[2]]);
    const Vec3 n = cross(mesh.vertices[f[1]] - mesh.vertices[f[0]],
                         mesh.vertices[f[2]] - mesh.vertices[f[0]]);
    if (dot(n, centroid) < 0.0) std::swap(f[1], f[2]);
  }
  mesh.cells = std::move(faces);
  mesh.boundary_vertex.assign(mesh.n_vertices(), 1);
  mesh.h = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) mesh.h = std::max(mesh.h, mesh.cell_diameter(c));
  return mesh;
}

} // namespace cfem
