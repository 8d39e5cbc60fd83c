#include "poro/vtk.hpp"

#include <cstdio>

#include "poro/errors.hpp"
#include "poro/textio.hpp"

namespace poro {

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<VtkField>& fields) {
  const size_t nv = mesh.vertices.size();
  for (const auto& f : fields) {
    if (f.components != 1 && f.components != 3) {
      throw DimensionMismatchError("vtk field " + f.name +
                                   ": components must be 1 or 3");
    }
    if (f.values.size() != nv * static_cast<size_t>(f.components)) {
      throw DimensionMismatchError("vtk field " + f.name +
                                   ": value count does not match vertices");
    }
  }

  FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw SolverError("cannot open " + path);
  std::fprintf(out, "# vtk DataFile Version 2.0\n");
  std::fprintf(out, "poroelastic fields\n");
  std::fprintf(out, "ASCII\n");
  std::fprintf(out, "DATASET UNSTRUCTURED_GRID\n");

  std::fprintf(out, "POINTS %zu double\n", nv);
  for (const auto& v : mesh.vertices) {
    std::fprintf(out, "%s %s %s\n", g17(v[0]).c_str(), g17(v[1]).c_str(),
                 g17(v[2]).c_str());
  }

  const int nvert = mesh.dim + 1;
  const size_t nc = mesh.cells.size();
  std::fprintf(out, "CELLS %zu %zu\n", nc, nc * static_cast<size_t>(nvert + 1));
  for (const auto& cell : mesh.cells) {
    std::fprintf(out, "%d", nvert);
    for (int v = 0; v < nvert; ++v) std::fprintf(out, " %d", cell[v]);
    std::fprintf(out, "\n");
  }
  std::fprintf(out, "CELL_TYPES %zu\n", nc);
  const int vtk_type = mesh.dim == 2 ? 5 : 10;  // triangle / tetra
  for (size_t i = 0; i < nc; ++i) std::fprintf(out, "%d\n", vtk_type);

  if (!fields.empty()) {
    std::fprintf(out, "POINT_DATA %zu\n", nv);
    for (const auto& f : fields) {
      if (f.components == 3) {
        std::fprintf(out, "VECTORS %s double\n", f.name.c_str());
        for (size_t i = 0; i < nv; ++i) {
          std::fprintf(out, "%s %s %s\n", g17(f.values[3 * i]).c_str(),
                       g17(f.values[3 * i + 1]).c_str(),
                       g17(f.values[3 * i + 2]).c_str());
        }
      } else {
        std::fprintf(out, "SCALARS %s double 1\n", f.name.c_str());
        std::fprintf(out, "LOOKUP_TABLE default\n");
        for (size_t i = 0; i < nv; ++i) {
          std::fprintf(out, "%s\n", g17(f.values[i]).c_str());
        }
      }
    }
  }
  std::fclose(out);
}

}  // namespace poro
