#include "curvefem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "curvefem/errors.hpp"

namespace cfem {

double AffineMesh::cell_diameter(int c) const {
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) d = std::max(d, norm(cell_vertex(c, i) - cell_vertex(c, j)));
  return d;
}

std::array<std::uint8_t, 3> AffineMesh::cell_eps(int c) const {
  return {boundary_vertex[cells[c][0]], boundary_vertex[cells[c][1]],
          boundary_vertex[cells[c][2]]};
}

Vec3 AffineMesh::affine_map(int c, const Vec3& xref) const {
  const double l0 = 1.0 - xref[0] - xref[1];
  return l0 * cell_vertex(c, 0) + xref[0] * cell_vertex(c, 1) + xref[1] * cell_vertex(c, 2);
}

Mat3 AffineMesh::affine_jacobian(int c) const {
  Mat3 j;
  const Vec3 e1 = cell_vertex(c, 1) - cell_vertex(c, 0);
  const Vec3 e2 = cell_vertex(c, 2) - cell_vertex(c, 0);
  for (int i = 0; i < ambient_dim; ++i) {
    j(i, 0) = e1[i];
    j(i, 1) = e2[i];
  }
  return j;
}

CellClass classify(const AffineMesh& mesh, int cell) {
  if (mesh.surface) return CellClass::Boundary;
  const auto eps = mesh.cell_eps(cell);
  const int count = eps[0] + eps[1] + eps[2];
  return count >= 2 ? CellClass::Boundary : CellClass::Internal;
}

EdgeTopology build_edges(const AffineMesh& mesh) {
  EdgeTopology topo;
  topo.cell_edges.resize(mesh.n_cells());
  std::map<std::array<int, 2>, int> index;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int e = 0; e < 3; ++e) {
      int a = mesh.cells[c][(e + 1) % 3];
      int b = mesh.cells[c][(e + 2) % 3];
      if (a > b) std::swap(a, b);
      const std::array<int, 2> key{a, b};
      auto it = index.find(key);
      int id;
      if (it == index.end()) {
        id = static_cast<int>(topo.edges.size());
        index.emplace(key, id);
        topo.edges.push_back(key);
        topo.edge_cells.push_back({c, -1});
      } else {
        id = it->second;
        if (topo.edge_cells[id][1] != -1)
          throw MeshError("edge shared by more than two cells");
        topo.edge_cells[id][1] = c;
      }
      topo.cell_edges[c][e] = id;
    }
  }
  return topo;
}

namespace {

double signed_area2(const AffineMesh& mesh, int c) {
  const Vec3 a = mesh.cell_vertex(c, 0);
  const Vec3 b = mesh.cell_vertex(c, 1);
  const Vec3 d = mesh.cell_vertex(c, 2);
  return 0.5 * ((b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0]));
}

} // namespace

void validate_mesh(const AffineMesh& mesh, const ImplicitDomain* domain) {
  const auto topo = build_edges(mesh);

  // watertightness and boundary-face bookkeeping
  std::vector<std::pair<int, int>> open_faces;
  for (std::size_t e = 0; e < topo.edges.size(); ++e) {
    if (topo.edge_cells[e][1] != -1) continue;
    const int c = topo.edge_cells[e][0];
    for (int le = 0; le < 3; ++le)
      if (topo.cell_edges[c][le] == static_cast<int>(e)) open_faces.emplace_back(c, le);
  }
  if (mesh.surface) {
    if (!open_faces.empty()) throw MeshError("surface mesh is not closed");
  } else {
    auto sorted = mesh.boundary_faces;
    std::sort(sorted.begin(), sorted.end());
    std::sort(open_faces.begin(), open_faces.end());
    if (sorted != open_faces) throw MeshError("boundary_faces do not match mesh topology");
  }

  // boundary flags: exactly the vertices incident to boundary faces
  std::vector<std::uint8_t> expect(mesh.n_vertices(), 0);
  if (mesh.surface) {
    std::fill(expect.begin(), expect.end(), 1);
  } else {
    for (const auto& [c, le] : mesh.boundary_faces) {
      expect[mesh.cells[c][(le + 1) % 3]] = 1;
      expect[mesh.cells[c][(le + 2) % 3]] = 1;
    }
  }
  if (expect != mesh.boundary_vertex) throw MeshError("boundary vertex flags inconsistent");

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto eps = mesh.cell_eps(c);
    const int count = eps[0] + eps[1] + eps[2];
    if (!mesh.surface && count == 3)
      throw MeshError("cell with all vertices on the boundary");
    // two boundary vertices must span a boundary edge, otherwise the curved
    // correction would fold the cell over the boundary
    if (!mesh.surface && count == 2) {
      int opp = -1;
      for (int i = 0; i < 3; ++i)
        if (!eps[i]) opp = i;
      const int eid = topo.cell_edges[c][opp];
      if (topo.edge_cells[eid][1] != -1)
        throw MeshError("boundary vertices of a cell do not span a boundary edge");
    }
    if (!mesh.surface && signed_area2(mesh, c) <= 0.0)
      throw MeshError("non-positively oriented cell");
  }

  if (domain != nullptr) {
    const double tol = 1e-12;
    for (int v = 0; v < mesh.n_vertices(); ++v)
      if (mesh.boundary_vertex[v] &&
          std::abs(domain->signed_distance(mesh.vertices[v])) > tol)
        throw MeshError("boundary vertex off the zero level set");
  }
}

double max_min_diameter_ratio(const AffineMesh& mesh) {
  double dmin = std::numeric_limits<double>::max(), dmax = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double d = mesh.cell_diameter(c);
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  return dmax / dmin;
}

Vec3 edge_point_ref(int edge, double t) {
  Bary lam{0, 0, 0, 0};
  lam[(edge + 1) % 3] = 1.0 - t;
  lam[(edge + 2) % 3] = t;
  return bary_to_ref(lam, 2);
}

Vec3 exact_map(const AffineMesh& mesh, const ImplicitDomain& domain, int cell, const Vec3& xref,
               int r) {
  if (mesh.surface) return domain.project(mesh.affine_map(cell, xref));
  if (classify(mesh, cell) == CellClass::Internal) return mesh.affine_map(cell, xref);

  const auto eps = mesh.cell_eps(cell);
  const Bary lam = ref_to_bary(xref, 2);
  double lam_star = 0.0;
  for (int i = 0; i < 3; ++i)
    if (eps[i]) lam_star += lam[i];
  const Vec3 x = mesh.affine_map(cell, xref);
  if (lam_star < 1e-12) return x; // correction vanishes at order r+2

  Bary ylam{0, 0, 0, 0};
  for (int i = 0; i < 3; ++i)
    if (eps[i]) ylam[i] = lam[i] / lam_star;
  const Vec3 y = mesh.affine_map(cell, bary_to_ref(ylam, 2));
  const Vec3 by = domain.project(y); // throws when outside the tubular band
  return x + std::pow(lam_star, r + 2) * (by - y);
}

CurvedMesh::CurvedMesh(std::shared_ptr<const AffineMesh> parent, DomainPtr domain, int r)
    : parent_(std::move(parent)), domain_(std::move(domain)), r_(r), geom_basis_(2, r) {
  if (r < 1) throw UnsupportedDegree("geometric degree must be >= 1");
  const AffineMesh& mesh = *parent_;
  const int n_nodes = geom_basis_.size();
  control_points_.resize(static_cast<std::size_t>(mesh.n_cells()) * n_nodes);
  classes_.resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    classes_[c] = classify(mesh, c);
    Vec3* cp = control_points_.data() + static_cast<std::size_t>(c) * n_nodes;
    // r = 1 reproduces the affine mesh exactly (its nodes are the vertices)
    const bool straight = domain_ == nullptr || r_ == 1 ||
                          (!mesh.surface && classes_[c] == CellClass::Internal);
    for (int i = 0; i < n_nodes; ++i) {
      const Vec3 xref = geom_basis_.node_ref(i);
      cp[i] = straight ? mesh.affine_map(c, xref) : exact_map(mesh, *domain_, c, xref, r_);
    }
  }
}

MapEval CurvedMesh::map(int cell, const Vec3& xref) const {
  const int n = geom_basis_.size();
  std::vector<double> values(n);
  std::vector<Vec3> grads(n);
  geom_basis_.eval(xref, values.data());
  geom_basis_.eval_grad(xref, grads.data());

  const Vec3* cp = control_points(cell);
  MapEval out;
  out.x = {0, 0, 0};
  const int ad = ambient_dim();
  for (int i = 0; i < n; ++i) {
    out.x += values[i] * cp[i];
    for (int a = 0; a < ad; ++a)
      for (int j = 0; j < 2; ++j) out.jacobian(a, j) += cp[i][a] * grads[i][j];
  }
  if (parent_->surface) {
    const double g = det(gram(out.jacobian, 3, 2), 2);
    if (g <= 0.0) throw DegenerateElement("surface cell with singular metric");
    out.jdet = std::sqrt(g);
  } else {
    out.jdet = det(out.jacobian, 2);
    if (out.jdet <= 0.0) throw DegenerateElement("cell with non-positive jacobian");
  }
  return out;
}

Vec3 CurvedMesh::map_point(int cell, const Vec3& xref) const {
  const int n = geom_basis_.size();
  std::vector<double> values(n);
  geom_basis_.eval(xref, values.data());
  const Vec3* cp = control_points(cell);
  Vec3 x{0, 0, 0};
  for (int i = 0; i < n; ++i) x += values[i] * cp[i];
  return x;
}

double CurvedMesh::max_boundary_distance(int quad_order) const {
  if (domain_ == nullptr) return 0.0;
  double worst = 0.0;
  const QuadratureRule line = quadrature(1, quad_order);
  if (parent_->surface) {
    const QuadratureRule tri = quadrature(2, 15);
    for (int c = 0; c < n_cells(); ++c)
      for (int q = 0; q < tri.size(); ++q)
        worst = std::max(worst,
                         std::abs(domain_->signed_distance(map_point(c, tri.point_ref(q)))));
    return worst;
  }
  for (const auto& [c, le] : parent_->boundary_faces)
    for (int q = 0; q < line.size(); ++q) {
      const Vec3 xref = edge_point_ref(le, line.points[q][1]);
      worst = std::max(worst, std::abs(domain_->signed_distance(map_point(c, xref))));
    }
  return worst;
}

CurvedMesh elevate(std::shared_ptr<const AffineMesh> mesh, DomainPtr domain, int r) {
  return CurvedMesh(std::move(mesh), std::move(domain), r);
}

AffineMesh refine(const AffineMesh& mesh, const ImplicitDomain* domain) {
  const auto topo = build_edges(mesh);
  AffineMesh out;
  out.ambient_dim = mesh.ambient_dim;
  out.surface = mesh.surface;
  out.vertices = mesh.vertices;

  std::vector<std::uint8_t> edge_on_boundary(topo.edges.size(), 0);
  for (const auto& [c, le] : mesh.boundary_faces) edge_on_boundary[topo.cell_edges[c][le]] = 1;

  std::vector<int> midpoint(topo.edges.size());
  for (std::size_t e = 0; e < topo.edges.size(); ++e) {
    Vec3 m = 0.5 * (mesh.vertices[topo.edges[e][0]] + mesh.vertices[topo.edges[e][1]]);
    if (domain != nullptr && (mesh.surface || edge_on_boundary[e])) m = domain->project(m);
    midpoint[e] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(m);
  }

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& v = mesh.cells[c];
    const int m0 = midpoint[topo.cell_edges[c][0]]; // opposite v0: edge (v1,v2)
    const int m1 = midpoint[topo.cell_edges[c][1]];
    const int m2 = midpoint[topo.cell_edges[c][2]];
    out.cells.push_back({v[0], m2, m1});
    out.cells.push_back({v[1], m0, m2});
    out.cells.push_back({v[2], m1, m0});
    out.cells.push_back({m0, m1, m2});
  }

  // rebuild boundary data topologically
  const auto new_topo = build_edges(out);
  out.boundary_vertex.assign(out.n_vertices(), 0);
  if (out.surface) {
    std::fill(out.boundary_vertex.begin(), out.boundary_vertex.end(), 1);
  } else {
    for (std::size_t e = 0; e < new_topo.edges.size(); ++e) {
      if (new_topo.edge_cells[e][1] != -1) continue;
      const int c = new_topo.edge_cells[e][0];
      for (int le = 0; le < 3; ++le)
        if (new_topo.cell_edges[c][le] == static_cast<int>(e)) out.boundary_faces.emplace_back(c, le);
      out.boundary_vertex[new_topo.edges[e][0]] = 1;
      out.boundary_vertex[new_topo.edges[e][1]] = 1;
    }
    std::sort(out.boundary_faces.begin(), out.boundary_faces.end());
  }

  out.h = 0.0;
  for (int c = 0; c < out.n_cells(); ++c) out.h = std::max(out.h, out.cell_diameter(c));
  return out;
}

} // namespace cfem
