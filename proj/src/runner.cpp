#include "poro/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "poro/errors.hpp"
#include "poro/oracle0d.hpp"
#include "poro/textio.hpp"

namespace poro {

namespace {

using ordered_json = nlohmann::ordered_json;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SolverError("cannot open " + path);
  f << text;
}

void write_json(const std::string& path, const ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string ensure_out_dir(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out);
  write_text(cfg.out + "/config.txt", echo_config(cfg));
  return cfg.out;
}

ProblemKind kind_from_config(const RunConfig& cfg) {
  if (cfg.problem == "forward") return ProblemKind::Forward;
  if (cfg.problem == "refconf") return ProblemKind::Refconf;
  throw ConfigError("this subcommand needs problem = forward or refconf");
}

ordered_json run_summary(const RunConfig& cfg, const SingleRun& run) {
  const RunResult& r = run.result;
  ordered_json j;
  j["problem"] = cfg.problem;
  j["formulation"] = cfg.formulation;
  j["dim"] = cfg.dim;
  j["stationary"] = r.stationary;
  j["iterations"] = r.steps_total;
  j["post_activation_iterations"] = r.post_activation_iters;
  j["newton_total"] = r.newton_total;
  j["aa_fallbacks"] = r.aa_fallbacks;
  j["r0"] = r.r0;
  j["r_rel_final"] = r.r0 > 0.0 ? r.r_final / r.r0 : r.r_final;
  j["avg_porosity"] = run.avg_porosity;
  j["wall_time_s"] = run.wall_time_s;
  return j;
}

double domain_diameter(const RunConfig& cfg) {
  double d2 = cfg.length_x * cfg.length_x + cfg.length_y * cfg.length_y;
  if (cfg.dim == 3) d2 += cfg.length_z * cfg.length_z;
  return std::sqrt(d2);
}

}  // namespace

Mesh make_mesh(const RunConfig& cfg) {
  if (cfg.dim == 2) return build_square_mesh(cfg.nx, cfg.ny, cfg.length_x);
  return build_slab_mesh(cfg.nx, cfg.ny, cfg.nz,
                         {cfg.length_x, cfg.length_y, cfg.length_z});
}

FemProblem make_problem(const RunConfig& cfg, const Mesh& mesh,
                        ProblemKind kind) {
  return FemProblem::create(mesh, kind,
                            formulation_from_string(cfg.formulation),
                            to_material_params(cfg), sliding_bcs(cfg.dim));
}

SingleRun solve_stationary(const FemProblem& problem,
                           const TimeStepperOptions& opt) {
  SingleRun out;
  const double t0 = now_seconds();
  out.result = run_transient(problem, opt);
  out.wall_time_s = now_seconds() - t0;
  if (!out.result.stationary) {
    throw DivergenceError("stationarity not reached within max_steps = " +
                          std::to_string(opt.max_steps));
  }
  out.avg_porosity = problem.avg_eulerian_porosity(out.result.x);
  return out;
}

std::vector<VtkField> state_fields(const FemProblem& problem,
                                   const Eigen::VectorXd& x) {
  const Mesh& mesh = *problem.mesh;
  const DofMap& dm = problem.dofmap;
  const int nv = mesh.n_vertices();
  const int dim = mesh.dim;
  std::vector<VtkField> fields;

  VtkField d{"displacement", 3, std::vector<double>(3 * nv, 0.0)};
  for (int v = 0; v < nv; ++v) {
    for (int c = 0; c < dim; ++c) {
      d.values[3 * v + c] = x[dm.node_dof(Field::Displacement, v, c)];
    }
  }
  fields.push_back(std::move(d));

  VtkField phi{"porosity", 1, std::vector<double>(nv)};
  for (int v = 0; v < nv; ++v) {
    phi.values[v] = x[dm.node_dof(Field::Porosity, v)];
  }
  fields.push_back(std::move(phi));

  VtkField lam{"lambda", 1, std::vector<double>(nv)};
  for (int v = 0; v < nv; ++v) {
    lam.values[v] = x[dm.node_dof(Field::Multiplier, v)];
  }
  fields.push_back(std::move(lam));

  if (dm.has(Field::Pressure)) {
    VtkField mu{"mu", 1, std::vector<double>(nv)};
    for (int v = 0; v < nv; ++v) {
      mu.values[v] = x[dm.node_dof(Field::Pressure, v)];
    }
    fields.push_back(std::move(mu));
  }
  if (dm.has(Field::Velocity)) {
    VtkField u{"velocity", 3, std::vector<double>(3 * nv, 0.0)};
    for (int v = 0; v < nv; ++v) {
      for (int c = 0; c < dim; ++c) {
        u.values[3 * v + c] = x[dm.node_dof(Field::Velocity, v, c)];
      }
    }
    fields.push_back(std::move(u));
  }
  return fields;
}

RoundTripResult roundtrip(const RunConfig& cfg) {
  RoundTripResult out;
  const TimeStepperOptions opt = to_stepper_options(cfg);

  Mesh omega = make_mesh(cfg);
  FemProblem ref = make_problem(cfg, omega, ProblemKind::Refconf);
  out.refconf = solve_stationary(ref, opt);
  out.refconf_avg_porosity = out.refconf.avg_porosity;

  // Reference geometry: vertices moved by the inverse displacement (P2
  // midside values dropped).
  const Eigen::VectorXd& xhat = out.refconf.result.x;
  std::vector<std::array<double, 3>> dhat(
      static_cast<size_t>(omega.n_vertices()), {0.0, 0.0, 0.0});
  for (int v = 0; v < omega.n_vertices(); ++v) {
    for (int c = 0; c < cfg.dim; ++c) {
      dhat[static_cast<size_t>(v)][static_cast<size_t>(c)] =
          xhat[ref.dofmap.node_dof(Field::Displacement, v, c)];
    }
  }
  Mesh omega0 = warp_mesh(omega, dhat);

  FemProblem fwd = make_problem(cfg, omega0, ProblemKind::Forward);
  fwd.phi_ref = ref.porosity(xhat);  // computed reference porosity
  out.forward = solve_stationary(fwd, opt);
  out.recovered_avg_porosity = out.forward.avg_porosity;
  out.porosity_rel_error =
      std::abs(out.recovered_avg_porosity - cfg.phi_bar) / cfg.phi_bar;

  const Eigen::VectorXd& xf = out.forward.result.x;
  double max_dist = 0.0;
  for (int v = 0; v < omega.n_vertices(); ++v) {
    double dist2 = 0.0;
    for (int c = 0; c < cfg.dim; ++c) {
      const double forward_pos =
          omega0.vertices[static_cast<size_t>(v)][static_cast<size_t>(c)] +
          xf[fwd.dofmap.node_dof(Field::Displacement, v, c)];
      const double diff =
          forward_pos -
          omega.vertices[static_cast<size_t>(v)][static_cast<size_t>(c)];
      dist2 += diff * diff;
    }
    max_dist = std::max(max_dist, std::sqrt(dist2));
  }
  out.geometric_mismatch = max_dist;
  out.geometric_mismatch_rel = max_dist / domain_diameter(cfg);
  return out;
}

int run_forward(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.problem = "forward";
  const std::string dir = ensure_out_dir(c);
  Mesh mesh = make_mesh(c);
  FemProblem problem = make_problem(c, mesh, ProblemKind::Forward);
  SingleRun run = solve_stationary(problem, to_stepper_options(c));
  write_trajectory_csv(dir + "/trajectory.csv", run.result.trajectory);
  write_vtk(dir + "/fields.vtk", mesh, state_fields(problem, run.result.x));
  write_json(dir + "/summary.json", run_summary(c, run));
  return 0;
}

int run_refconf(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.problem = "refconf";
  const std::string dir = ensure_out_dir(c);
  Mesh mesh = make_mesh(c);
  FemProblem problem = make_problem(c, mesh, ProblemKind::Refconf);
  SingleRun run = solve_stationary(problem, to_stepper_options(c));
  write_trajectory_csv(dir + "/trajectory.csv", run.result.trajectory);
  write_vtk(dir + "/fields.vtk", mesh, state_fields(problem, run.result.x));
  write_json(dir + "/summary.json", run_summary(c, run));
  return 0;
}

int run_roundtrip(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.problem = "roundtrip";
  const std::string dir = ensure_out_dir(c);
  RoundTripResult rt = roundtrip(c);

  write_trajectory_csv(dir + "/refconf_trajectory.csv",
                       rt.refconf.result.trajectory);
  write_trajectory_csv(dir + "/forward_trajectory.csv",
                       rt.forward.result.trajectory);

  // Rebuild the two geometries for field output (solutions own no mesh).
  Mesh omega = make_mesh(c);
  FemProblem ref = make_problem(c, omega, ProblemKind::Refconf);
  write_vtk(dir + "/refconf_fields.vtk", omega,
            state_fields(ref, rt.refconf.result.x));
  std::vector<std::array<double, 3>> dhat(
      static_cast<size_t>(omega.n_vertices()), {0.0, 0.0, 0.0});
  for (int v = 0; v < omega.n_vertices(); ++v) {
    for (int comp = 0; comp < c.dim; ++comp) {
      dhat[static_cast<size_t>(v)][static_cast<size_t>(comp)] =
          rt.refconf.result.x[ref.dofmap.node_dof(Field::Displacement, v,
                                                  comp)];
    }
  }
  Mesh omega0 = warp_mesh(omega, dhat);
  FemProblem fwd = make_problem(c, omega0, ProblemKind::Forward);
  write_vtk(dir + "/forward_fields.vtk", omega0,
            state_fields(fwd, rt.forward.result.x));

  ordered_json j;
  RunConfig crc = c;
  crc.problem = "refconf";
  j["refconf"] = run_summary(crc, rt.refconf);
  crc.problem = "forward";
  j["forward"] = run_summary(crc, rt.forward);
  j["phi_bar"] = c.phi_bar;
  j["refconf_avg_porosity"] = rt.refconf_avg_porosity;
  j["recovered_avg_porosity"] = rt.recovered_avg_porosity;
  j["porosity_rel_error"] = rt.porosity_rel_error;
  j["geometric_mismatch"] = rt.geometric_mismatch;
  j["geometric_mismatch_rel"] = rt.geometric_mismatch_rel;
  write_json(dir + "/summary.json", j);
  return 0;
}

int run_aa_sweep(const RunConfig& cfg) {
  const std::string dir = ensure_out_dir(cfg);
  const ProblemKind kind = kind_from_config(cfg);
  Mesh mesh = make_mesh(cfg);

  std::string csv = "depth,iterations,wall_time_s\n";
  ordered_json rows = ordered_json::array();
  for (int depth : cfg.aa_depth) {
    FemProblem problem = make_problem(cfg, mesh, kind);
    TimeStepperOptions opt = to_stepper_options(cfg);
    opt.aa_depth = depth;
    SingleRun run = solve_stationary(problem, opt);
    csv += std::to_string(depth) + "," +
           std::to_string(run.result.steps_total) + "," +
           g17(run.wall_time_s) + "\n";
    ordered_json j = run_summary(cfg, run);
    j["depth"] = depth;
    rows.push_back(j);
  }
  write_text(dir + "/aa_sweep.csv", csv);
  ordered_json j;
  j["problem"] = cfg.problem;
  j["formulation"] = cfg.formulation;
  j["tol"] = cfg.tol;
  j["runs"] = rows;
  write_json(dir + "/aa_sweep.json", j);
  return 0;
}

int run_oracle(const RunConfig& cfg) {
  const std::string dir = ensure_out_dir(cfg);
  OracleOptions opt;
  opt.dim = cfg.dim;
  opt.kind = kind_from_config(cfg);
  opt.params = to_material_params(cfg);
  opt.dt = cfg.dt;
  opt.t_ramp = cfg.t_ramp;
  const double stop_tol = cfg.tol * cfg.phi_bar;
  std::vector<OracleState> states = oracle_run(opt, cfg.max_steps, stop_tol);

  std::string csv = "Time,phiAvg,lambda,stretch_a,stretch_b";
  if (cfg.dim == 3) csv += ",stretch_c";
  csv += "\n";
  for (const auto& st : states) {
    csv += g17(st.t) + "," + g17(oracle_avg_porosity(opt, st)) + "," +
           g17(st.lambda) + "," + g17(st.stretch[0]) + "," +
           g17(st.stretch[1]);
    if (cfg.dim == 3) csv += "," + g17(st.stretch[2]);
    csv += "\n";
  }
  write_text(dir + "/oracle.csv", csv);

  const OracleState& last = states.back();
  ordered_json j;
  j["problem"] = cfg.problem;
  j["dim"] = cfg.dim;
  j["steps"] = states.size() - 1;
  j["time"] = last.t;
  j["avg_porosity"] = oracle_avg_porosity(opt, last);
  j["porosity"] = last.phi;
  j["lambda"] = last.lambda;
  j["pressure"] = oracle_pressure(opt, last);
  j["stretch"] = {last.stretch[0], last.stretch[1], last.stretch[2]};
  write_json(dir + "/summary.json", j);
  return 0;
}

}  // namespace poro
