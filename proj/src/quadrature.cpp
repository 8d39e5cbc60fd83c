#include "poro/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "poro/errors.hpp"

namespace poro {
namespace {

void push(QuadratureRule& r, double x, double y, double z, double w) {
  r.points.push_back({x, y, z});
  r.weights.push_back(w);
}

// Orbit of barycentric (a,b,b) on the triangle: 3 points.
void tri_orbit3(QuadratureRule& r, double a, double b, double w) {
  // barycentric (l0,l1,l2) -> reference (x,y) = (l1,l2)
  push(r, b, b, 0.0, w);
  push(r, a, b, 0.0, w);
  push(r, b, a, 0.0, w);
}

// Full orbit of barycentric (a,b,c), all distinct: 6 points.
void tri_orbit6(QuadratureRule& r, double a, double b, double c, double w) {
  const double l[3] = {a, b, c};
  int perm[3] = {0, 1, 2};
  std::sort(perm, perm + 3);
  do {
    push(r, l[perm[1]], l[perm[2]], 0.0, w);
  } while (std::next_permutation(perm, perm + 3));
}

// Orbit of barycentric (1-3a, a, a, a) on the tet: 4 points.
void tet_orbit4(QuadratureRule& r, double a, double w) {
  const double s = 1.0 - 3.0 * a;
  push(r, a, a, a, w);
  push(r, s, a, a, w);
  push(r, a, s, a, w);
  push(r, a, a, s, w);
}

// Orbit of barycentric (a,a,b,c): 12 distinct permutations.
void tet_orbit12(QuadratureRule& r, double a, double b, double c, double w) {
  double l[4] = {a, a, b, c};
  std::sort(l, l + 4);
  do {
    push(r, l[1], l[2], l[3], w);
  } while (std::next_permutation(l, l + 4));
}

}  // namespace

QuadratureRule quadrature(int dim, int degree) {
  QuadratureRule r;
  r.dim = dim;
  r.degree = degree;
  if (dim == 2) {
    if (degree == 1) {
      push(r, 1.0 / 3.0, 1.0 / 3.0, 0.0, 0.5);
    } else if (degree == 2) {
      tri_orbit3(r, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0);
    } else if (degree == 6) {
      // 12-point symmetric rule, exact to degree 6, all weights positive.
      // Normalized weights scaled by the reference area 1/2.
      tri_orbit3(r, 0.873821971016996, 0.063089014491502,
                 0.050844906370207 / 2.0);
      tri_orbit3(r, 0.501426509658179, 0.249286745170910,
                 0.116786275726379 / 2.0);
      tri_orbit6(r, 0.636502499121399, 0.310352451033785, 0.053145049844816,
                 0.082851075618374 / 2.0);
    } else {
      throw DimensionMismatchError("unsupported quadrature degree for dim 2");
    }
  } else if (dim == 3) {
    if (degree == 1) {
      push(r, 0.25, 0.25, 0.25, 1.0 / 6.0);
    } else if (degree == 2) {
      const double a = (5.0 - std::sqrt(5.0)) / 20.0;
      tet_orbit4(r, a, 1.0 / 24.0);
    } else if (degree == 6) {
      // 24-point symmetric rule, exact to degree 6, all weights positive.
      // Weights already scaled to sum to the reference volume 1/6.
      tet_orbit4(r, 0.214602871259152, 0.006653791709695);
      tet_orbit4(r, 0.040673958534611, 0.001679535175887);
      tet_orbit4(r, 0.322337890142275, 0.009226196923942);
      tet_orbit12(r, 0.063661001875018, 0.269672331458316, 0.603005664791649,
                  0.008035714285714);
    } else {
      throw DimensionMismatchError("unsupported quadrature degree for dim 3");
    }
  } else {
    throw DimensionMismatchError("quadrature: dim must be 2 or 3");
  }
  return r;
}

}  // namespace poro
