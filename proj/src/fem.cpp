#include "poro/fem.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "poro/errors.hpp"

namespace poro {

std::vector<FieldSpec> active_fields(int dim, Formulation f) {
  std::vector<FieldSpec> fields = {{Field::Displacement, 2, dim},
                                   {Field::Porosity, 1, 1},
                                   {Field::Multiplier, 1, 1}};
  if (f == Formulation::MixedP) fields.push_back({Field::Pressure, 1, 1});
  if (f == Formulation::MixedU) fields.push_back({Field::Velocity, 2, dim});
  return fields;
}

DofMap::DofMap(const Mesh& mesh, Formulation f)
    : mesh_(&mesh), fields_(active_fields(mesh.dim, f)) {
  offsets_.clear();
  total_ = 0;
  dofs_per_cell_ = 0;
  for (const auto& spec : fields_) {
    offsets_.push_back(total_);
    const int n = spec.order == 1 ? mesh.n_vertices() : mesh.n_p2_nodes();
    total_ += n * spec.components;
    const int nb = spec.order == 1 ? p1_nbasis(mesh.dim) : p2_nbasis(mesh.dim);
    dofs_per_cell_ += nb * spec.components;
  }
}

namespace {
int field_slot(const std::vector<FieldSpec>& fields, Field f) {
  for (size_t i = 0; i < fields.size(); ++i)
    if (fields[i].field == f) return static_cast<int>(i);
  return -1;
}
}  // namespace

bool DofMap::has(Field f) const { return field_slot(fields_, f) >= 0; }

int DofMap::offset(Field f) const {
  const int s = field_slot(fields_, f);
  if (s < 0) throw std::logic_error("DofMap: field not active");
  return offsets_[s];
}

int DofMap::components(Field f) const {
  return fields_[field_slot(fields_, f)].components;
}

int DofMap::nodes(Field f) const {
  const auto& spec = fields_[field_slot(fields_, f)];
  return spec.order == 1 ? mesh_->n_vertices() : mesh_->n_p2_nodes();
}

int DofMap::count(Field f) const { return nodes(f) * components(f); }

int DofMap::node_dof(Field f, int node, int comp) const {
  return offset(f) + node * components(f) + comp;
}

void DofMap::cell_dofs(int cell, std::vector<int>& out) const {
  out.clear();
  out.reserve(dofs_per_cell_);
  const Mesh& mesh = *mesh_;
  const int nv = mesh.verts_per_cell();
  const int ne = mesh.edges_per_cell();
  for (const auto& spec : fields_) {
    const int off = offset(spec.field);
    const int nc = spec.components;
    auto push_node = [&](int node) {
      for (int c = 0; c < nc; ++c) out.push_back(off + node * nc + c);
    };
    for (int v = 0; v < nv; ++v) push_node(mesh.cells[cell][v]);
    if (spec.order == 2)
      for (int e = 0; e < ne; ++e)
        push_node(mesh.n_vertices() + mesh.cell_edges[cell][e]);
  }
}

std::vector<DirichletBC> sliding_bcs(int dim) {
  std::vector<DirichletBC> bcs = {{XMIN, Field::Displacement, 0, 0.0},
                                  {YMIN, Field::Displacement, 1, 0.0}};
  if (dim == 3) bcs.push_back({ZMIN, Field::Displacement, 2, 0.0});
  return bcs;
}

std::vector<DirichletBC> velocity_wall_bcs(const Mesh& mesh) {
  if (!boundary_axis_aligned(mesh))
    throw ConfigError(
        "mixed-u essential velocity conditions need a fully tagged, "
        "axis-aligned boundary");
  std::set<int> tags;
  for (const auto& f : mesh.boundary_facets) tags.insert(f.tag);
  std::vector<DirichletBC> bcs;
  for (int tag : tags) bcs.push_back({tag, Field::Velocity, tag / 2, 0.0});
  return bcs;
}

std::map<int, double> collect_dirichlet(const Mesh& mesh, const DofMap& dofmap,
                                        const std::vector<DirichletBC>& bcs) {
  std::map<std::pair<int, int>, int> edge_index;
  for (int e = 0; e < mesh.n_edges(); ++e)
    edge_index[{mesh.edges[e][0], mesh.edges[e][1]}] = e;
  auto edge_of = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    return edge_index.at({a, b});
  };

  std::map<int, double> out;
  for (const auto& bc : bcs) {
    if (!dofmap.has(bc.field)) continue;
    const bool p2 = bc.field == Field::Displacement || bc.field == Field::Velocity;
    for (const auto& facet : mesh.boundary_facets) {
      if (facet.tag != bc.tag) continue;
      const int nfv = mesh.dim;  // facet vertices
      for (int k = 0; k < nfv; ++k)
        out[dofmap.node_dof(bc.field, facet.verts[k], bc.comp)] = bc.value;
      if (!p2) continue;
      if (mesh.dim == 2) {
        const int e = edge_of(facet.verts[0], facet.verts[1]);
        out[dofmap.node_dof(bc.field, mesh.n_vertices() + e, bc.comp)] = bc.value;
      } else {
        const int pairs[3][2] = {{0, 1}, {1, 2}, {0, 2}};
        for (const auto& pr : pairs) {
          const int e = edge_of(facet.verts[pr[0]], facet.verts[pr[1]]);
          out[dofmap.node_dof(bc.field, mesh.n_vertices() + e, bc.comp)] =
              bc.value;
        }
      }
    }
  }
  return out;
}

FemProblem FemProblem::create(const Mesh& mesh, ProblemKind kind, Formulation f,
                              const MaterialParams& params,
                              std::vector<DirichletBC> displacement_bcs) {
  FemProblem p;
  p.mesh = &mesh;
  p.kind = kind;
  p.formulation = f;
  p.params = params;
  p.dofmap = DofMap(mesh, f);
  p.rule = quadrature(mesh.dim, 6);
  p.tab_p1 = tabulate_p1(p.rule);
  p.tab_p2 = tabulate_p2(p.rule);
  p.bcs = std::move(displacement_bcs);
  if (f == Formulation::MixedU) {
    auto wall = velocity_wall_bcs(mesh);
    p.bcs.insert(p.bcs.end(), wall.begin(), wall.end());
  }
  p.constrained = collect_dirichlet(mesh, p.dofmap, p.bcs);
  if (kind == ProblemKind::Forward)
    p.phi_ref = Eigen::VectorXd::Constant(mesh.n_vertices(), params.phi_bar);
  return p;
}

Eigen::VectorXd FemProblem::initial_state() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dofmap.total());
  const double phi0 = params.phi_bar;
  const int np = dofmap.nodes(Field::Porosity);
  for (int i = 0; i < np; ++i)
    x[dofmap.node_dof(Field::Porosity, i)] =
        kind == ProblemKind::Forward ? phi_ref[i] : phi0;
  if (dofmap.has(Field::Pressure)) {
    const int nmu = dofmap.nodes(Field::Pressure);
    for (int i = 0; i < nmu; ++i)
      x[dofmap.node_dof(Field::Pressure, i)] = params.p_ref;
  }
  for (const auto& [dof, value] : constrained) x[dof] = value;
  return x;
}

Eigen::VectorXd FemProblem::porosity(const Eigen::VectorXd& x) const {
  return x.segment(dofmap.offset(Field::Porosity), dofmap.count(Field::Porosity));
}

void FemProblem::set_porosity(Eigen::VectorXd& x, const Eigen::VectorXd& phi) const {
  x.segment(dofmap.offset(Field::Porosity), dofmap.count(Field::Porosity)) = phi;
}

}  // namespace poro
