#pragma once

#include <string>
#include <vector>

#include "poro/fem.hpp"
#include "poro/materials.hpp"
#include "poro/time_stepper.hpp"

namespace poro {

// Flat key = value run configuration. Lengths follow the mesh unit (the test
// geometries use cm), pressures are Pa, times s, permeability length^2/(s Pa),
// source coefficients 1/(s Pa). A -1 on mesh counts / lengths means
// "dimension-dependent default" (square 16x16 of side 1, slab 10x2x2 of
// 5x1x1), resolved by finalize().
struct RunConfig {
  std::string problem = "refconf";      // forward | refconf | roundtrip
  std::string formulation = "primal";   // primal | mixed_p | mixed_u
  int dim = 2;
  int nx = -1, ny = -1, nz = -1;
  double length_x = -1.0, length_y = -1.0, length_z = -1.0;

  double dt = 0.01;        // s
  double t_ramp = 0.1;     // s
  double tol = 1e-6;       // relative stationarity tolerance
  int max_steps = 20000;
  std::string ramp_mode = "linear";  // linear | staged
  int stages = 10;
  std::vector<int> aa_depth = {0};   // first entry drives single runs

  double newton_abs_tol = 1e-10;
  double newton_rel_tol = 1e-13;
  int newton_max_iter = 30;

  double C = 880.0;        // Pa
  double B = 1e5;          // Pa
  double b_ff = 1.0, b_ss = 1.0, b_nn = 1.0;
  double b_fs = 1.0, b_fn = 1.0, b_sn = 1.0;
  std::vector<double> fiber_f = {1.0, 0.0, 0.0};
  std::vector<double> fiber_s = {0.0, 1.0, 0.0};
  std::vector<double> fiber_n = {0.0, 0.0, 1.0};
  double q1 = 1.333;       // Pa
  double q2 = 550.0;       // Pa
  double q3 = 10.0;
  double k = 2e-7;         // length^2/(s Pa)
  double rho_f = 1.0;      // source-rate normalization density
  double p_ref = 0.0;      // Pa
  double phi_bar = 0.1;
  std::vector<double> beta = {1e-4};     // 1/(s Pa)
  std::vector<double> p_source = {1e4};  // Pa
  double gravity_x = 0.0, gravity_y = 0.0, gravity_z = 0.0;  // force/volume

  std::string out = "out";
  unsigned long seed = 0;
};

// Parses and validates; unknown or duplicate keys and out-of-range values
// throw ConfigError naming the key. The result is finalized.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

// Resolves the -1 mesh defaults and validates everything; throws ConfigError.
void finalize_config(RunConfig& cfg);

// Deterministic key = value dump; parse_config_text(echo_config(c)) == c.
std::string echo_config(const RunConfig& cfg);

MaterialParams to_material_params(const RunConfig& cfg);
TimeStepperOptions to_stepper_options(const RunConfig& cfg);
Formulation formulation_from_string(const std::string& name);

}  // namespace poro
