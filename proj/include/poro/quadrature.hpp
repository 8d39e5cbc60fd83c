#pragma once

#include <array>
#include <vector>

namespace poro {

// Quadrature rule on the reference simplex (triangle or tetrahedron).
// Points are reference coordinates; weights sum to the reference measure
// (1/2 for the triangle, 1/6 for the tet), so
//   integral over cell K ~= |det J_K| * sum_q w_q f(x_q).
struct QuadratureRule {
  int dim = 0;
  int degree = 0;
  std::vector<std::array<double, 3>> points;  // z unused in 2D
  std::vector<double> weights;
  int size() const { return static_cast<int>(weights.size()); }
};

// Supported: dim in {2,3}, degree in {1,2,6}. All weights positive.
// Throws DimensionMismatchError for unsupported combinations.
QuadratureRule quadrature(int dim, int degree);

}  // namespace poro
