#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "curvefem/errors.hpp"
#include "curvefem/mesh.hpp"

namespace cfem {

AffineMesh import_msh(const std::string& path, DomainPtr domain, double* max_snap) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string line;
  std::map<long, int> node_index;
  AffineMesh mesh;
  mesh.ambient_dim = 2;
  bool saw_nodes = false, saw_elements = false;
  double zmax = 0.0;

  while (std::getline(in, line)) {
    if (line.rfind("$MeshFormat", 0) == 0) {
      double version = 0.0;
      in >> version;
      if (std::abs(version - 2.2) > 1e-9)
        throw IoError("unsupported MSH version (expected ASCII 2.2)");
      std::getline(in, line);
    } else if (line.rfind("$Nodes", 0) == 0) {
      saw_nodes = true;
      long count = 0;
      in >> count;
      for (long i = 0; i < count; ++i) {
        long id;
        double x, y, z;
        in >> id >> x >> y >> z;
        node_index[id] = mesh.n_vertices();
        mesh.vertices.push_back({x, y, z});
        zmax = std::max(zmax, std::abs(z));
      }
      std::getline(in, line);
    } else if (line.rfind("$Elements", 0) == 0) {
      saw_elements = true;
      long count = 0;
      in >> count;
      std::getline(in, line);
      for (long i = 0; i < count; ++i) {
        std::getline(in, line);
        std::istringstream ss(line);
        long id, type, ntags;
        ss >> id >> type >> ntags;
        long tag;
        for (long t = 0; t < ntags; ++t) ss >> tag;
        if (type == 2) { // 3-node triangle
          long a, b, c;
          ss >> a >> b >> c;
          mesh.cells.push_back({node_index.at(a), node_index.at(b), node_index.at(c)});
        }
        // 2-node boundary lines (type 1) are ignored; boundary structure is
        // rebuilt from the triangle topology
      }
    }
  }
  if (!saw_nodes || !saw_elements) throw IoError("MSH file without $Nodes/$Elements");
  if (mesh.cells.empty()) throw IoError("MSH file contains no triangles");
  if (zmax > 1e-13) {
    mesh.ambient_dim = 3;
    mesh.surface = true;
  }

  // orientation + topological boundary
  if (!mesh.surface) {
    for (auto& cell : mesh.cells) {
      const Vec3 a = mesh.vertices[cell[0]];
      const Vec3 b = mesh.vertices[cell[1]];
      const Vec3 c = mesh.vertices[cell[2]];
      if ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) < 0.0)
        std::swap(cell[1], cell[2]);
    }
  }
  const auto topo = build_edges(mesh);
  mesh.boundary_vertex.assign(mesh.n_vertices(), 0);
  if (mesh.surface) {
    std::fill(mesh.boundary_vertex.begin(), mesh.boundary_vertex.end(), 1);
  } else {
    for (std::size_t e = 0; e < topo.edges.size(); ++e) {
      if (topo.edge_cells[e][1] != -1) continue;
      const int c = topo.edge_cells[e][0];
      for (int le = 0; le < 3; ++le)
        if (topo.cell_edges[c][le] == static_cast<int>(e)) mesh.boundary_faces.emplace_back(c, le);
      mesh.boundary_vertex[topo.edges[e][0]] = 1;
      mesh.boundary_vertex[topo.edges[e][1]] = 1;
    }
    std::sort(mesh.boundary_faces.begin(), mesh.boundary_faces.end());
  }

  // snap boundary vertices onto the zero level set
  double snap = 0.0;
  if (domain != nullptr) {
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      if (!mesh.boundary_vertex[v] && !mesh.surface) continue;
      const Vec3 p = domain->project(mesh.vertices[v]);
      snap = std::max(snap, norm(p - mesh.vertices[v]));
      mesh.vertices[v] = p;
    }
  }
  if (max_snap != nullptr) *max_snap = snap;

  mesh.h = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) mesh.h = std::max(mesh.h, mesh.cell_diameter(c));
  validate_mesh(mesh, domain.get());
  return mesh;
}

void export_vtk(const CurvedMesh& mesh, const std::string& path,
                const std::vector<double>* /*vertex_values*/) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw IoError("cannot write " + path);

  const int s = std::max(2, 2 * mesh.degree()); // linearization resolution
  const auto node_id = [&](int i, int j) { return i * (s + 1) - i * (i - 1) / 2 + j; };
  std::vector<Vec3> local_pts;
  std::vector<std::array<int, 3>> local_tris;
  for (int i = 0; i <= s; ++i)
    for (int j = 0; j <= s - i; ++j)
      local_pts.push_back({static_cast<double>(i) / s, static_cast<double>(j) / s, 0.0});
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s - i; ++j) {
      local_tris.push_back({node_id(i, j), node_id(i + 1, j), node_id(i, j + 1)});
      if (j < s - i - 1)
        local_tris.push_back({node_id(i + 1, j), node_id(i + 1, j + 1), node_id(i, j + 1)});
    }

  const int pts_per_cell = static_cast<int>(local_pts.size());
  const long n_points = static_cast<long>(mesh.n_cells()) * pts_per_cell;
  const long n_tris = static_cast<long>(mesh.n_cells()) * local_tris.size();

  std::fprintf(f, "# vtk DataFile Version 3.0\ncurved mesh (linearized)\nASCII\n");
  std::fprintf(f, "DATASET UNSTRUCTURED_GRID\nPOINTS %ld double\n", n_points);
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (const auto& p : local_pts) {
      const Vec3 x = mesh.map_point(c, p);
      std::fprintf(f, "%.16g %.16g %.16g\n", x[0], x[1], x[2]);
    }
  std::fprintf(f, "CELLS %ld %ld\n", n_tris, 4 * n_tris);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const long base = static_cast<long>(c) * pts_per_cell;
    for (const auto& t : local_tris)
      std::fprintf(f, "3 %ld %ld %ld\n", base + t[0], base + t[1], base + t[2]);
  }
  std::fprintf(f, "CELL_TYPES %ld\n", n_tris);
  for (long i = 0; i < n_tris; ++i) std::fprintf(f, "5\n");
  std::fclose(f);
}

} // namespace cfem
