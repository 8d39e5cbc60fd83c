#include "poro/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "poro/elements.hpp"
#include "poro/errors.hpp"

namespace poro {

const char* tag_name(int tag) {
  static const char* names[6] = {"XMIN", "XMAX", "YMIN", "YMAX", "ZMIN", "ZMAX"};
  return (tag >= 0 && tag < 6) ? names[tag] : "NONE";
}

std::array<double, 3> Mesh::p2_node_coords(int node) const {
  if (node < n_vertices()) return vertices[node];
  const auto& e = edges[node - n_vertices()];
  const auto& a = vertices[e[0]];
  const auto& b = vertices[e[1]];
  return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
}

namespace {

void build_edges(Mesh& mesh) {
  std::map<std::pair<int, int>, int> index;
  const auto* ev = cell_edge_verts(mesh.dim);
  const int ne = cell_edge_count(mesh.dim);
  mesh.cell_edges.assign(mesh.cells.size(), {-1, -1, -1, -1, -1, -1});
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int e = 0; e < ne; ++e) {
      int a = mesh.cells[c][ev[e][0]];
      int b = mesh.cells[c][ev[e][1]];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = index.try_emplace({a, b}, mesh.n_edges());
      if (inserted) mesh.edges.push_back({a, b});
      mesh.cell_edges[c][e] = it->second;
    }
  }
}

int classify_facet(const Mesh& mesh, const std::array<int, 3>& verts,
                   const std::array<double, 3>& lo,
                   const std::array<double, 3>& hi, double tol) {
  const int nfv = mesh.dim;  // facet vertex count: 2 in 2D, 3 in 3D
  // Priority order XMIN, XMAX, YMIN, YMAX, ZMIN, ZMAX.
  for (int axis = 0; axis < mesh.dim; ++axis) {
    for (int side = 0; side < 2; ++side) {
      const double plane = side == 0 ? lo[axis] : hi[axis];
      bool on = true;
      for (int k = 0; k < nfv && on; ++k)
        on = std::abs(mesh.vertices[verts[k]][axis] - plane) <= tol;
      if (on) return 2 * axis + side;
    }
  }
  return -1;
}

void build_boundary(Mesh& mesh) {
  // Collect cell facets; those seen once are boundary.
  std::map<std::array<int, 3>, std::pair<std::array<int, 3>, int>> count;
  auto add = [&](std::array<int, 3> verts, int cell) {
    std::array<int, 3> key = verts;
    std::sort(key.begin(), key.end());
    auto it = count.find(key);
    if (it == count.end())
      count.emplace(key, std::make_pair(verts, cell));
    else
      count.erase(it);
  };
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cv = mesh.cells[c];
    if (mesh.dim == 2) {
      add({cv[0], cv[1], -1}, c);
      add({cv[1], cv[2], -1}, c);
      add({cv[2], cv[0], -1}, c);
    } else {
      add({cv[1], cv[2], cv[3]}, c);
      add({cv[0], cv[2], cv[3]}, c);
      add({cv[0], cv[1], cv[3]}, c);
      add({cv[0], cv[1], cv[2]}, c);
    }
  }
  std::array<double, 3> lo = {1e300, 1e300, 1e300};
  std::array<double, 3> hi = {-1e300, -1e300, -1e300};
  for (const auto& v : mesh.vertices)
    for (int d = 0; d < 3; ++d) {
      lo[d] = std::min(lo[d], v[d]);
      hi[d] = std::max(hi[d], v[d]);
    }
  double scale = 0.0;
  for (int d = 0; d < mesh.dim; ++d) scale = std::max(scale, hi[d] - lo[d]);
  const double tol = 1e-9 * scale;
  for (const auto& [key, value] : count) {
    Mesh::Facet f;
    f.verts = value.first;
    f.cell = value.second;
    f.tag = classify_facet(mesh, f.verts, lo, hi, tol);
    mesh.boundary_facets.push_back(f);
  }
}

double cell_measure(const Mesh& mesh, int c) {
  const auto& cv = mesh.cells[c];
  const auto& p0 = mesh.vertices[cv[0]];
  if (mesh.dim == 2) {
    const auto& p1 = mesh.vertices[cv[1]];
    const auto& p2 = mesh.vertices[cv[2]];
    return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) -
                  (p1[1] - p0[1]) * (p2[0] - p0[0]));
  }
  double m[3][3];
  for (int i = 0; i < 3; ++i)
    for (int d = 0; d < 3; ++d) m[i][d] = mesh.vertices[cv[i + 1]][d] - p0[d];
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return det / 6.0;
}

void finish(Mesh& mesh) {
  for (int c = 0; c < mesh.n_cells(); ++c)
    if (cell_measure(mesh, c) <= 0.0)
      throw std::logic_error("mesh builder produced a non-positive cell");
  build_edges(mesh);
  build_boundary(mesh);
}

}  // namespace

Mesh build_square_mesh(int nx, int ny, double side) {
  if (nx < 1 || ny < 1 || side <= 0.0)
    throw ConfigError("build_square_mesh: need nx,ny >= 1 and side > 0");
  Mesh mesh;
  mesh.dim = 2;
  const double hx = side / nx, hy = side / ny;
  auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices.push_back({i * hx, j * hy, 0.0});
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1),
                d = vid(i, j + 1);
      mesh.cells.push_back({a, b, c, -1});
      mesh.cells.push_back({a, c, d, -1});
    }
  finish(mesh);
  return mesh;
}

Mesh build_slab_mesh(int nx, int ny, int nz, std::array<double, 3> lengths) {
  if (nx < 1 || ny < 1 || nz < 1 || lengths[0] <= 0.0 || lengths[1] <= 0.0 ||
      lengths[2] <= 0.0)
    throw ConfigError("build_slab_mesh: need nx,ny,nz >= 1 and lengths > 0");
  Mesh mesh;
  mesh.dim = 3;
  const double h[3] = {lengths[0] / nx, lengths[1] / ny, lengths[2] / nz};
  auto vid = [&](int i, int j, int k) {
    return (k * (ny + 1) + j) * (nx + 1) + i;
  };
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        mesh.vertices.push_back({i * h[0], j * h[1], k * h[2]});
  // Six tets per cube along the main diagonal, one per axis permutation.
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  const int parity[6] = {+1, -1, -1, +1, +1, -1};
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (int p = 0; p < 6; ++p) {
          int idx[3] = {i, j, k};
          std::array<int, 4> tet;
          tet[0] = vid(idx[0], idx[1], idx[2]);
          for (int s = 0; s < 3; ++s) {
            idx[perms[p][s]] += 1;
            tet[s + 1] = vid(idx[0], idx[1], idx[2]);
          }
          if (parity[p] < 0) std::swap(tet[2], tet[3]);
          mesh.cells.push_back(tet);
        }
  finish(mesh);
  return mesh;
}

double mesh_volume(const Mesh& mesh) {
  double v = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) v += cell_measure(mesh, c);
  return v;
}

std::array<double, 3> facet_normal(const Mesh& mesh,
                                   const Mesh::Facet& facet) {
  std::array<double, 3> n{};
  const auto& a = mesh.vertices[facet.verts[0]];
  const auto& b = mesh.vertices[facet.verts[1]];
  if (mesh.dim == 2) {
    n = {b[1] - a[1], -(b[0] - a[0]), 0.0};
  } else {
    const auto& c = mesh.vertices[facet.verts[2]];
    const double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const double v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    n = {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
         u[0] * v[1] - u[1] * v[0]};
  }
  // Orient away from the owning cell's centroid.
  const auto& cv = mesh.cells[facet.cell];
  std::array<double, 3> centroid{};
  const int nv = mesh.verts_per_cell();
  for (int i = 0; i < nv; ++i)
    for (int d = 0; d < 3; ++d) centroid[d] += mesh.vertices[cv[i]][d] / nv;
  double dotc = 0.0;
  for (int d = 0; d < 3; ++d) dotc += n[d] * (centroid[d] - a[d]);
  if (dotc > 0.0)
    for (auto& x : n) x = -x;
  double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  for (auto& x : n) x /= len;
  return n;
}

Mesh warp_mesh(const Mesh& mesh,
               const std::vector<std::array<double, 3>>& displacement) {
  if (displacement.size() != mesh.vertices.size())
    throw DimensionMismatchError("warp_mesh: one displacement per vertex");
  Mesh out = mesh;
  for (size_t i = 0; i < out.vertices.size(); ++i)
    for (int d = 0; d < 3; ++d) out.vertices[i][d] += displacement[i][d];
  for (int c = 0; c < out.n_cells(); ++c)
    if (cell_measure(out, c) <= 0.0)
      throw SolverError("warp_mesh: displacement inverts a cell");
  return out;
}

bool boundary_axis_aligned(const Mesh& mesh) {
  for (const auto& f : mesh.boundary_facets) {
    if (f.tag < 0) return false;
    const int axis = f.tag / 2;
    const double x0 = mesh.vertices[f.verts[0]][axis];
    double scale = 1e-12;
    for (int k = 0; k < mesh.dim; ++k)
      scale = std::max(scale, std::abs(mesh.vertices[f.verts[k]][axis]));
    for (int k = 1; k < mesh.dim; ++k)
      if (std::abs(mesh.vertices[f.verts[k]][axis] - x0) > 1e-9 * scale)
        return false;
  }
  return true;
}

}  // namespace poro
