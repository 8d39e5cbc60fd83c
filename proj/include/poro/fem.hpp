#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "poro/elements.hpp"
#include "poro/materials.hpp"
#include "poro/mesh.hpp"
#include "poro/quadrature.hpp"
#include "poro/sparse.hpp"

namespace poro {

// Forward: Lagrangian problem on the reference mesh, unknown displacement.
// Refconf: Eulerian inverse problem on the given (loaded) mesh, unknown
// inverse displacement; the reference configuration is recovered from it.
enum class ProblemKind { Forward, Refconf };

// Mass-equation treatment: Primal eliminates the pressure through the
// constitutive law, MixedP keeps pressure as a P1 unknown, MixedU keeps the
// Darcy velocity as a P2 vector unknown.
enum class Formulation { Primal, MixedP, MixedU };

enum class Field : int { Displacement = 0, Porosity, Multiplier, Pressure, Velocity };

struct FieldSpec {
  Field field;
  int order;       // 1 or 2
  int components;  // 1 or dim
};

// Taylor-Hood style layout: P2 vector displacement, P1 porosity, P1
// multiplier, plus the formulation-specific unknown.
std::vector<FieldSpec> active_fields(int dim, Formulation f);

// Field-major global DoF layout; within a field, node-major with interleaved
// components. P2 nodes are mesh vertices followed by edge midpoints.
class DofMap {
 public:
  DofMap() = default;
  DofMap(const Mesh& mesh, Formulation f);

  int total() const { return total_; }
  bool has(Field f) const;
  int offset(Field f) const;
  int count(Field f) const;
  int components(Field f) const;
  int nodes(Field f) const;
  int node_dof(Field f, int node, int comp = 0) const;
  const std::vector<FieldSpec>& fields() const { return fields_; }

  // Concatenated global indices of all field DoFs on a cell, in the local
  // ordering the kernels use.
  void cell_dofs(int cell, std::vector<int>& out) const;
  int dofs_per_cell() const { return dofs_per_cell_; }

 private:
  const Mesh* mesh_ = nullptr;
  std::vector<FieldSpec> fields_;
  std::vector<int> offsets_;
  int total_ = 0;
  int dofs_per_cell_ = 0;
};

struct DirichletBC {
  int tag;
  Field field;
  int comp;
  double value;
};

// Zero normal displacement on the three minimum faces.
std::vector<DirichletBC> sliding_bcs(int dim);

// u . n = 0 on the whole boundary, imposed component-wise. Requires every
// boundary facet tagged and axis-aligned; throws ConfigError otherwise.
std::vector<DirichletBC> velocity_wall_bcs(const Mesh& mesh);

// Resolve BCs to a dof -> value map (P1: facet vertices; P2: vertices plus
// facet edge midpoints).
std::map<int, double> collect_dirichlet(const Mesh& mesh, const DofMap& dofmap,
                                        const std::vector<DirichletBC>& bcs);

// Assembled nonlinear problem. Holds configuration only; per-step data
// (dt, ramp, previous porosity) travels in StepData.
struct FemProblem {
  const Mesh* mesh = nullptr;
  ProblemKind kind = ProblemKind::Forward;
  Formulation formulation = Formulation::Primal;
  MaterialParams params;
  DofMap dofmap;
  QuadratureRule rule;
  ElementTab tab_p1, tab_p2;
  std::vector<DirichletBC> bcs;
  std::map<int, double> constrained;
  // Forward only: P1 nodal reference porosity (phi^L_0). Refconf uses
  // params.phi_bar instead.
  Eigen::VectorXd phi_ref;

  static FemProblem create(const Mesh& mesh, ProblemKind kind, Formulation f,
                           const MaterialParams& params,
                           std::vector<DirichletBC> displacement_bcs);

  // Zero displacement, reference porosity, zero multiplier, and consistent
  // auxiliary fields; satisfies all Dirichlet constraints.
  Eigen::VectorXd initial_state() const;

  Eigen::VectorXd porosity(const Eigen::VectorXd& x) const;
  void set_porosity(Eigen::VectorXd& x, const Eigen::VectorXd& phi) const;

  // Spatial average of the Eulerian porosity: forward integral(phi^L)/
  // integral(J) over the reference mesh, refconf integral(phi0)/|Omega|.
  double avg_eulerian_porosity(const Eigen::VectorXd& x) const;
};

struct StepData {
  double dt = 1.0;
  double ramp = 1.0;
  const Eigen::VectorXd* phi_prev = nullptr;  // P1 nodal, previous time level
};

// Backward-Euler residual (and optionally Jacobian) of the coupled system.
// Dirichlet rows are identity rows with residual x_i - value_i.
void assemble_system(const FemProblem& p, const StepData& sd,
                     const Eigen::VectorXd& x, Eigen::VectorXd& r,
                     SparseMatrix* jac);

// Steady mass-equation rows of the active formulation (time term omitted),
// one entry per porosity node. Vanishes at a stationary state.
Eigen::VectorXd stationary_residual(const FemProblem& p,
                                    const Eigen::VectorXd& x, double ramp);

}  // namespace poro
