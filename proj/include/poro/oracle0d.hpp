#pragma once

#include <array>
#include <vector>

#include "poro/fem.hpp"
#include "poro/materials.hpp"

namespace poro {

// Reference solver for spatially uniform states on sliding-boundary boxes,
// where both problems collapse to a small algebraic system per time step:
// diagonal stretches, one multiplier, one porosity. Independent of the FE
// stack on purpose (finite-difference Jacobian, dense elimination).
struct OracleOptions {
  int dim = 2;
  ProblemKind kind = ProblemKind::Forward;
  MaterialParams params;
  double dt = 0.01;
  double t_ramp = 0.1;
};

struct OracleState {
  double t = 0.0;
  // Forward: diagonal of F. Refconf: diagonal of f = I + grad(dhat), so the
  // deformation gradient is diag(1/a, 1/b, 1/c). Unused entries stay 1.
  std::array<double, 3> stretch{1.0, 1.0, 1.0};
  double lambda = 0.0;
  double phi = 0.0;
};

OracleState oracle_initial(const OracleOptions& opt);

// One backward-Euler step (advances st.t by opt.dt).
void oracle_step(const OracleOptions& opt, OracleState& st);

// Steps until the porosity increment drops to stop_tol (stationary) or
// max_steps is hit; returns the whole trajectory, initial state first.
std::vector<OracleState> oracle_run(const OracleOptions& opt, int max_steps,
                                    double stop_tol);

// Fluid pressure p_tilde of the state.
double oracle_pressure(const OracleOptions& opt, const OracleState& st);

// Eulerian volume-averaged porosity (forward: phi/J; refconf: phi).
double oracle_avg_porosity(const OracleOptions& opt, const OracleState& st);

}  // namespace poro
