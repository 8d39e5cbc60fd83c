#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "poro/fem.hpp"
#include "poro/newton.hpp"

namespace poro {

enum class RampMode { Linear, Staged };

struct TimeStepperOptions {
  double dt = 0.01;
  double t_ramp = 0.1;
  double tol = 1e-6;  // stationarity: ||R|| <= tol * R0
  int max_steps = 20000;
  int aa_depth = 0;
  RampMode ramp_mode = RampMode::Linear;
  int stages = 10;
  NewtonOptions newton;
};

struct TrajectoryPoint {
  double time;
  double phi_avg;
  double residual;  // ||R||/R0 once R0 is captured, raw ||R|| before
  int newton_iters;
  int aa_fallback;
};

struct RunResult {
  Eigen::VectorXd x;
  std::vector<TrajectoryPoint> trajectory;
  bool stationary = false;
  double r0 = 0.0;
  double r_final = 0.0;
  int steps_total = 0;
  int post_activation_iters = 0;  // fixed-point iterations after R0 capture
  int newton_total = 0;
  int aa_fallbacks = 0;
};

// Load ramp factor min(t / t_ramp, 1); t_ramp <= 0 means no ramp.
double ramp_factor(double t, double t_ramp);

// One backward-Euler step: solves the coupled system at t + dt with warm
// start x (modified in place).
NewtonReport time_step(const FemProblem& problem, const StepData& sd,
                       Eigen::VectorXd& x, const NewtonOptions& newton);

// March to the stationary state. The porosity iterate is accelerated by
// Anderson mixing (depth aa_depth) once the ramp has completed and R0 is
// captured; accelerated iterates with non-positive porosity fall back to the
// Picard iterate. Staged mode holds the ramp at s/stages levels and requires
// per-stage stationarity before advancing.
RunResult run_transient(const FemProblem& problem,
                        const TimeStepperOptions& opt);

// CSV with header Time,phiAvg,residual,newton_iters; the first two columns
// match the plotted trajectory format.
void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectoryPoint>& trajectory);

}  // namespace poro
