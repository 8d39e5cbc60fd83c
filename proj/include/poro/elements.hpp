#pragma once

#include <array>
#include <vector>

#include "poro/quadrature.hpp"

namespace poro {

// Lagrange basis on the reference simplex. P1 nodes sit at vertices; P2 adds
// one node per edge (midpoint). Edge ordering matches Mesh::cell_edge_verts.
inline int p1_nbasis(int dim) { return dim + 1; }
inline int p2_nbasis(int dim) { return dim == 2 ? 6 : 10; }

// Edge (vertex pair) ordering within a reference cell.
inline const std::array<int, 2>* cell_edge_verts(int dim) {
  static const std::array<int, 2> tri[3] = {{0, 1}, {1, 2}, {2, 0}};
  static const std::array<int, 2> tet[6] = {{0, 1}, {0, 2}, {0, 3},
                                            {1, 2}, {1, 3}, {2, 3}};
  return dim == 2 ? tri : tet;
}
inline int cell_edge_count(int dim) { return dim == 2 ? 3 : 6; }

// Evaluate basis values and reference-coordinate gradients at point xi.
// vals has nbasis entries, grads nbasis*dim (row per basis function).
void p1_eval(int dim, const double* xi, double* vals, double* grads);
void p2_eval(int dim, const double* xi, double* vals, double* grads);

// Basis tabulated at every point of a quadrature rule.
struct ElementTab {
  int dim = 0;
  int nbasis = 0;
  std::vector<double> values;     // [q*nbasis + a]
  std::vector<double> ref_grads;  // [(q*nbasis + a)*dim + d]
  double value(int q, int a) const { return values[q * nbasis + a]; }
  const double* ref_grad(int q, int a) const {
    return &ref_grads[(q * nbasis + a) * dim];
  }
};

ElementTab tabulate_p1(const QuadratureRule& rule);
ElementTab tabulate_p2(const QuadratureRule& rule);

}  // namespace poro
