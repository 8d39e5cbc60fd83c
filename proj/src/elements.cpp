#include "poro/elements.hpp"

namespace poro {
namespace {

// Barycentric coordinates and their constant reference gradients.
void barycentric(int dim, const double* xi, double* L, double* dL) {
  const int nb = dim + 1;
  L[0] = 1.0;
  for (int d = 0; d < dim; ++d) {
    L[0] -= xi[d];
    L[d + 1] = xi[d];
  }
  for (int i = 0; i < nb * dim; ++i) dL[i] = 0.0;
  for (int d = 0; d < dim; ++d) {
    dL[0 * dim + d] = -1.0;
    dL[(d + 1) * dim + d] = 1.0;
  }
}

}  // namespace

void p1_eval(int dim, const double* xi, double* vals, double* grads) {
  double L[4], dL[12];
  barycentric(dim, xi, L, dL);
  const int nb = dim + 1;
  for (int i = 0; i < nb; ++i) {
    vals[i] = L[i];
    for (int d = 0; d < dim; ++d) grads[i * dim + d] = dL[i * dim + d];
  }
}

void p2_eval(int dim, const double* xi, double* vals, double* grads) {
  double L[4], dL[12];
  barycentric(dim, xi, L, dL);
  const int nv = dim + 1;
  const int ne = cell_edge_count(dim);
  const auto* ev = cell_edge_verts(dim);
  for (int i = 0; i < nv; ++i) {
    vals[i] = L[i] * (2.0 * L[i] - 1.0);
    for (int d = 0; d < dim; ++d)
      grads[i * dim + d] = (4.0 * L[i] - 1.0) * dL[i * dim + d];
  }
  for (int e = 0; e < ne; ++e) {
    const int i = ev[e][0], j = ev[e][1];
    const int a = nv + e;
    vals[a] = 4.0 * L[i] * L[j];
    for (int d = 0; d < dim; ++d)
      grads[a * dim + d] = 4.0 * (L[i] * dL[j * dim + d] + L[j] * dL[i * dim + d]);
  }
}

namespace {

ElementTab tabulate(const QuadratureRule& rule, int nbasis,
                    void (*eval)(int, const double*, double*, double*)) {
  ElementTab tab;
  tab.dim = rule.dim;
  tab.nbasis = nbasis;
  const int nq = rule.size();
  tab.values.resize(static_cast<size_t>(nq) * nbasis);
  tab.ref_grads.resize(static_cast<size_t>(nq) * nbasis * rule.dim);
  for (int q = 0; q < nq; ++q)
    eval(rule.dim, rule.points[q].data(), &tab.values[q * nbasis],
         &tab.ref_grads[static_cast<size_t>(q) * nbasis * rule.dim]);
  return tab;
}

}  // namespace

ElementTab tabulate_p1(const QuadratureRule& rule) {
  return tabulate(rule, p1_nbasis(rule.dim), p1_eval);
}

ElementTab tabulate_p2(const QuadratureRule& rule) {
  return tabulate(rule, p2_nbasis(rule.dim), p2_eval);
}

}  // namespace poro
