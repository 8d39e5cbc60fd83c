#pragma once

#include <string>

#include "poro/config.hpp"
#include "poro/fem.hpp"
#include "poro/mesh.hpp"
#include "poro/time_stepper.hpp"
#include "poro/vtk.hpp"

namespace poro {

Mesh make_mesh(const RunConfig& cfg);

// Wires mesh, materials, BCs and formulation; mesh must outlive the problem.
FemProblem make_problem(const RunConfig& cfg, const Mesh& mesh,
                        ProblemKind kind);

struct SingleRun {
  RunResult result;
  double avg_porosity = 0.0;
  double wall_time_s = 0.0;
};

// run_transient + stationarity enforcement (DivergenceError when max_steps
// runs out first).
SingleRun solve_stationary(const FemProblem& problem,
                           const TimeStepperOptions& opt);

struct RoundTripResult {
  SingleRun refconf;
  SingleRun forward;
  double refconf_avg_porosity = 0.0;    // stationary avg phi0 on Omega
  double recovered_avg_porosity = 0.0;  // forward avg Eulerian porosity
  double porosity_rel_error = 0.0;      // vs phi_bar
  double geometric_mismatch = 0.0;      // max vertex |X + d(X) - x|
  double geometric_mismatch_rel = 0.0;  // divided by the domain diameter
};

// Refconf on the given mesh, warp by the inverse displacement, forward on the
// warped mesh with the computed reference porosity.
RoundTripResult roundtrip(const RunConfig& cfg);

// Vertex-projected point fields of a state (displacement, porosity, lambda,
// plus mu / velocity when the formulation carries them).
std::vector<VtkField> state_fields(const FemProblem& problem,
                                   const Eigen::VectorXd& x);

// CLI entry points; each writes config echo, CSV, VTK and summary.json into
// cfg.out and returns 0. Errors are reported by exception.
int run_forward(const RunConfig& cfg);
int run_refconf(const RunConfig& cfg);
int run_roundtrip(const RunConfig& cfg);
int run_aa_sweep(const RunConfig& cfg);
int run_oracle(const RunConfig& cfg);

}  // namespace poro
