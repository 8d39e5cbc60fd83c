#include "poro/time_stepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "poro/errors.hpp"
#include "poro/stationary.hpp"
#include "poro/textio.hpp"

namespace poro {

double ramp_factor(double t, double t_ramp) {
  if (t_ramp <= 0.0) return 1.0;
  return std::min(t / t_ramp, 1.0);
}

NewtonReport time_step(const FemProblem& problem, const StepData& sd,
                       Eigen::VectorXd& x, const NewtonOptions& newton) {
  auto assemble = [&](const Eigen::VectorXd& xk, Eigen::VectorXd& r,
                      SparseMatrix& jac) {
    assemble_system(problem, sd, xk, r, &jac);
  };
  return newton_solve(assemble, x, newton);
}

namespace {

struct MarchState {
  AndersonAccelerator aa;
  StationarityMonitor monitor;
  RunResult result;
  Eigen::VectorXd x;

  MarchState(int depth, double tol, Eigen::VectorXd x0)
      : aa(depth), monitor{tol}, x(std::move(x0)) {}
};

// Advances one backward-Euler step and applies the porosity acceleration /
// stationarity bookkeeping shared by the Linear and Staged drivers.
void advance_step(const FemProblem& problem, const TimeStepperOptions& opt,
                  MarchState& st, double t_next, double ramp,
                  bool ramp_complete) {
  Eigen::VectorXd phi_prev = problem.porosity(st.x);
  StepData sd;
  sd.dt = opt.dt;
  sd.ramp = ramp;
  sd.phi_prev = &phi_prev;

  NewtonReport rep = time_step(problem, sd, st.x, opt.newton);
  st.result.newton_total += rep.iterations;

  // Stationarity is judged on the consistent post-step state; acceleration
  // only reshapes the porosity handed to the next step.
  Eigen::VectorXd g = problem.porosity(st.x);
  double rnorm = stationary_residual(problem, st.x, ramp).norm();
  st.result.r_final = rnorm;

  int fallback = 0;
  if (ramp_complete) {
    if (!st.monitor.captured()) {
      st.monitor.capture(rnorm);
      st.aa.reset();
      st.aa.observe(phi_prev, g);
      if (st.monitor.stationary(rnorm)) st.result.stationary = true;
    } else {
      st.result.post_activation_iters += 1;
      if (st.monitor.stationary(rnorm)) {
        st.result.stationary = true;
      } else {
        bool used_fallback = false;
        Eigen::VectorXd xacc = st.aa.propose(phi_prev, g, &used_fallback);
        if ((xacc.array() <= 0.0).any()) {
          xacc = g;
          used_fallback = true;
        }
        if (used_fallback) {
          fallback = 1;
          st.result.aa_fallbacks += 1;
        }
        problem.set_porosity(st.x, xacc);
      }
    }
  }

  double reported = st.monitor.captured() && st.monitor.r0 > 0.0
                        ? rnorm / st.monitor.r0
                        : rnorm;
  st.result.trajectory.push_back(
      {t_next, problem.avg_eulerian_porosity(st.x), reported, rep.iterations,
       fallback});
  st.result.steps_total += 1;
}

}  // namespace

RunResult run_transient(const FemProblem& problem,
                        const TimeStepperOptions& opt) {
  if (opt.dt <= 0.0) throw ConfigError("dt must be positive");
  MarchState st(opt.aa_depth, opt.tol, problem.initial_state());

  if (opt.ramp_mode == RampMode::Linear) {
    double t = 0.0;
    for (int step = 0; step < opt.max_steps; ++step) {
      double t_next = t + opt.dt;
      // Snap to the exact ramp end so activation happens at ceil(t_ramp/dt)
      // steps despite accumulated roundoff in t.
      bool complete = opt.t_ramp <= 0.0 ||
                      t_next >= opt.t_ramp * (1.0 - 1e-12);
      double ramp = complete ? 1.0 : ramp_factor(t_next, opt.t_ramp);
      advance_step(problem, opt, st, t_next, ramp, complete);
      t = t_next;
      if (st.result.stationary) break;
    }
  } else {
    if (opt.stages < 1) throw ConfigError("stages must be >= 1");
    double t = 0.0;
    // One R0 for the whole run (captured at the first stage's first step);
    // per-stage R0 would be floor noise whenever consecutive levels share
    // their stationary state. The acceleration window resets per level
    // because the fixed-point map changes with the ramp.
    for (int stage = 1; stage <= opt.stages; ++stage) {
      double ramp = static_cast<double>(stage) / opt.stages;
      st.aa.reset();
      bool stage_done = false;
      while (!stage_done) {
        if (st.result.steps_total >= opt.max_steps) break;
        double t_next = t + opt.dt;
        st.result.stationary = false;
        advance_step(problem, opt, st, t_next, ramp, true);
        t = t_next;
        stage_done = st.result.stationary;
      }
      if (!stage_done) break;  // step budget exhausted mid-stage
      if (stage < opt.stages) st.result.stationary = false;
    }
  }

  st.result.r0 = st.monitor.captured() ? st.monitor.r0 : 0.0;
  st.result.x = st.x;
  return st.result;
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectoryPoint>& trajectory) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw SolverError("cannot open " + path);
  std::fprintf(f, "Time,phiAvg,residual,newton_iters\n");
  for (const auto& pt : trajectory) {
    std::fprintf(f, "%s,%s,%s,%d\n", g17(pt.time).c_str(),
                 g17(pt.phi_avg).c_str(), g17(pt.residual).c_str(),
                 pt.newton_iters);
  }
  std::fclose(f);
}

}  // namespace poro
