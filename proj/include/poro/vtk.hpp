#pragma once

#include <string>
#include <vector>

#include "poro/mesh.hpp"

namespace poro {

// Per-vertex point data; P2 fields are projected by keeping vertex values.
struct VtkField {
  std::string name;
  int components = 1;          // 1 (SCALARS) or 3 (VECTORS)
  std::vector<double> values;  // n_vertices * components, vertex-major
};

// Legacy ASCII unstructured-grid file; output is byte-stable for identical
// inputs.
void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<VtkField>& fields);

}  // namespace poro
