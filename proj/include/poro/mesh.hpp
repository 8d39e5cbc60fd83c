#pragma once

#include <array>
#include <string>
#include <vector>

namespace poro {

// Boundary tags for the axis-aligned generated meshes. When a facet could
// match several planes it takes the first match in this order.
enum BoundaryTag : int { XMIN = 0, XMAX, YMIN, YMAX, ZMIN, ZMAX };

const char* tag_name(int tag);

// Simplicial mesh (triangles in 2D, tetrahedra in 3D) with the edge list
// needed by P2 spaces and tagged boundary facets.
struct Mesh {
  int dim = 0;
  std::vector<std::array<double, 3>> vertices;  // z = 0 in 2D
  std::vector<std::array<int, 4>> cells;        // last entry -1 for triangles
  std::vector<std::array<int, 2>> edges;        // sorted vertex pairs, unique
  std::vector<std::array<int, 6>> cell_edges;   // per cell, -1 padded in 2D

  struct Facet {
    std::array<int, 3> verts;  // third entry -1 in 2D
    int cell;                  // owning cell
    int tag;                   // BoundaryTag, or -1 if none matched
  };
  std::vector<Facet> boundary_facets;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int verts_per_cell() const { return dim + 1; }
  int edges_per_cell() const { return dim == 2 ? 3 : 6; }

  // P2 node c = vertex c for c < n_vertices, else midpoint of edge
  // c - n_vertices.
  int n_p2_nodes() const { return n_vertices() + n_edges(); }
  std::array<double, 3> p2_node_coords(int node) const;
};

// Structured square [0,side]^2, nx*ny quads split along the lower-left to
// upper-right diagonal. All cells positively oriented.
Mesh build_square_mesh(int nx, int ny, double side);

// Structured box [0,Lx]x[0,Ly]x[0,Lz], each cube split into 6 tets sharing
// the main diagonal (consistent across neighbors).
Mesh build_slab_mesh(int nx, int ny, int nz, std::array<double, 3> lengths);

// Sum of cell measures.
double mesh_volume(const Mesh& mesh);

// Outward unit normal of a boundary facet.
std::array<double, 3> facet_normal(const Mesh& mesh, const Mesh::Facet& facet);

// Copy of the mesh with vertices moved by the given displacements.
// Connectivity and facet tags are kept from the source mesh.
Mesh warp_mesh(const Mesh& mesh,
               const std::vector<std::array<double, 3>>& displacement);

// True if every tagged boundary facet is still geometrically normal to the
// axis its tag names (needed by component-wise essential velocity BCs).
bool boundary_axis_aligned(const Mesh& mesh);

}  // namespace poro
