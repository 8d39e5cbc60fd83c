// Acceptance gate: each criterion prints exactly one PASS/FAIL line with the
// measured numbers and its pinned tolerance. Run all (no args) or a single one
// with --criterion N. Exit code = number of failed criteria.
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "poro/config.hpp"
#include "poro/fem.hpp"
#include "poro/materials.hpp"
#include "poro/mesh.hpp"
#include "poro/oracle0d.hpp"
#include "poro/quadrature.hpp"
#include "poro/runner.hpp"
#include "poro/stationary.hpp"
#include "poro/time_stepper.hpp"

using namespace poro;

namespace {

struct Check {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

double wall_now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// ---- criterion 1: 2D round trip recovers the loaded porosity --------------

Check criterion1() {
  constexpr double kTol = 0.025;  // 2.5 % on the recovered average porosity
  RunConfig cfg;                  // defaults: 16x16 unit square
  cfg.tol = 1e-6;
  cfg.aa_depth = {0};
  finalize_config(cfg);
  RoundTripResult rt = roundtrip(cfg);
  bool ok = rt.refconf.result.stationary && rt.forward.result.stationary &&
            rt.porosity_rel_error <= kTol;
  return {ok, fmt("16x16 round trip: recovered avg porosity %.9f vs %.2f "
                  "(rel err %.3e <= %.1e), geometry mismatch rel %.3e, "
                  "steps %d + %d",
                  rt.recovered_avg_porosity, cfg.phi_bar,
                  rt.porosity_rel_error, kTol, rt.geometric_mismatch_rel,
                  rt.refconf.result.steps_total, rt.forward.result.steps_total)};
}

// ---- criterion 2: Anderson acceleration cuts the iteration count ----------

Check criterion2() {
  constexpr double kMinReduction = 0.60;
  RunConfig cfg;
  cfg.tol = 1e-5;
  finalize_config(cfg);
  Mesh mesh = make_mesh(cfg);

  int post[2][3];
  const ProblemKind kinds[2] = {ProblemKind::Refconf, ProblemKind::Forward};
  for (int k = 0; k < 2; ++k) {
    FemProblem problem = make_problem(cfg, mesh, kinds[k]);
    for (int depth : {0, 1, 2}) {
      TimeStepperOptions opt = to_stepper_options(cfg);
      opt.aa_depth = depth;
      SingleRun run = solve_stationary(problem, opt);
      if (!run.result.stationary)
        return {false, fmt("depth %d run did not reach stationarity", depth)};
      post[k][depth] = run.result.post_activation_iters;
    }
  }
  bool ok = true;
  for (int k = 0; k < 2; ++k)
    for (int d : {1, 2})
      ok = ok && post[k][d] <= (1.0 - kMinReduction) * post[k][0];
  return {ok,
          fmt("post-activation iterations at tol 1e-5: refconf %d -> %d (AA1) "
              "/ %d (AA2), forward %d -> %d / %d; required reduction >= %.0f%%",
              post[0][0], post[0][1], post[0][2], post[1][0], post[1][1],
              post[1][2], 100.0 * kMinReduction)};
}

// ---- criterion 3: the three formulations agree -----------------------------

Check criterion3() {
  constexpr double kTol = 0.005;  // 0.5 % pairwise on the stationary average
  RunConfig base;
  base.nx = base.ny = 8;
  base.tol = 1e-5;
  base.aa_depth = {1};
  finalize_config(base);
  Mesh mesh = make_mesh(base);

  const char* names[3] = {"primal", "mixed_p", "mixed_u"};
  double avg[3];
  for (int i = 0; i < 3; ++i) {
    RunConfig cfg = base;
    cfg.formulation = names[i];
    FemProblem problem = make_problem(cfg, mesh, ProblemKind::Refconf);
    SingleRun run = solve_stationary(problem, to_stepper_options(cfg));
    if (!run.result.stationary)
      return {false, fmt("%s run did not reach stationarity", names[i])};
    avg[i] = run.avg_porosity;
  }
  double worst_pair = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      worst_pair = std::max(worst_pair, rel_diff(avg[i], avg[j]));

  RunConfig staged = base;
  staged.ramp_mode = "staged";
  FemProblem problem = make_problem(staged, mesh, ProblemKind::Refconf);
  SingleRun srun = solve_stationary(problem, to_stepper_options(staged));
  double staged_diff = rel_diff(srun.avg_porosity, avg[0]);

  bool ok = worst_pair <= kTol && staged_diff <= kTol &&
            srun.result.stationary;
  return {ok, fmt("8x8 refconf avg porosity: primal %.9f, mixed_p %.9f, "
                  "mixed_u %.9f (worst pairwise rel %.3e), staged ramp %.9f "
                  "(rel %.3e); tolerance %.1e",
                  avg[0], avg[1], avg[2], worst_pair, srun.avg_porosity,
                  staged_diff, kTol)};
}

// ---- criterion 4: 3D slab round trip ---------------------------------------

Check criterion4() {
  constexpr double kTol = 0.03;
  constexpr double kWallLimit = 900.0;  // seconds
  RunConfig cfg;
  cfg.dim = 3;  // defaults: 10x2x2 slab of 5 x 1 x 1
  cfg.tol = 1e-5;
  cfg.aa_depth = {0};
  finalize_config(cfg);
  double t0 = wall_now();
  RoundTripResult rt = roundtrip(cfg);
  double elapsed = wall_now() - t0;
  bool ok = rt.refconf.result.stationary && rt.forward.result.stationary &&
            rt.porosity_rel_error <= kTol && elapsed <= kWallLimit;
  return {ok, fmt("10x2x2 slab round trip: recovered avg porosity %.9f "
                  "(rel err %.3e <= %.1e) in %.1f s (limit %.0f s), "
                  "steps %d + %d",
                  rt.recovered_avg_porosity, rt.porosity_rel_error, kTol,
                  elapsed, kWallLimit, rt.refconf.result.steps_total,
                  rt.forward.result.steps_total)};
}

// ---- criterion 5: FEM forward trajectory matches the uniform reference ----

Check criterion5() {
  constexpr double kTrajTol = 1e-5;
  constexpr double kUniformTol = 1e-8;
  RunConfig cfg;
  cfg.nx = cfg.ny = 4;
  cfg.tol = 1e-6;
  finalize_config(cfg);
  Mesh mesh = make_mesh(cfg);
  FemProblem problem = make_problem(cfg, mesh, ProblemKind::Forward);
  SingleRun run = solve_stationary(problem, to_stepper_options(cfg));
  if (!run.result.stationary) return {false, "forward run not stationary"};

  OracleOptions o;
  o.dim = 2;
  o.kind = ProblemKind::Forward;
  o.params = to_material_params(cfg);
  o.dt = cfg.dt;
  o.t_ramp = cfg.t_ramp;
  OracleState st = oracle_initial(o);
  double worst_traj = 0.0;
  for (const TrajectoryPoint& tp : run.result.trajectory) {
    oracle_step(o, st);
    worst_traj =
        std::max(worst_traj, std::abs(tp.phi_avg - oracle_avg_porosity(o, st)));
  }

  const Eigen::VectorXd& x = run.result.x;
  const DofMap& dm = problem.dofmap;
  double phi_min = 1e300, phi_max = -1e300, lam_min = 1e300, lam_max = -1e300,
         lam_sum = 0.0;
  int nv = mesh.n_vertices();
  for (int v = 0; v < nv; ++v) {
    double phi = x[dm.node_dof(Field::Porosity, v)];
    double lam = x[dm.node_dof(Field::Multiplier, v)];
    phi_min = std::min(phi_min, phi);
    phi_max = std::max(phi_max, phi);
    lam_min = std::min(lam_min, lam);
    lam_max = std::max(lam_max, lam);
    lam_sum += lam;
  }
  double dphi = phi_max - phi_min;
  double lam_scale = std::max(1.0, std::abs(lam_sum / nv));
  double dlam = (lam_max - lam_min) / lam_scale;

  // the stationary displacement must be the homogeneous stretch (a-1) X
  int far = 0;
  for (int n = 0; n < dm.nodes(Field::Displacement); ++n)
    if (mesh.p2_node_coords(n)[0] > mesh.p2_node_coords(far)[0]) far = n;
  double a = 1.0 + x[dm.node_dof(Field::Displacement, far, 0)] /
                       mesh.p2_node_coords(far)[0];
  double dlin = 0.0;
  for (int n = 0; n < dm.nodes(Field::Displacement); ++n) {
    auto X = mesh.p2_node_coords(n);
    for (int c = 0; c < 2; ++c)
      dlin = std::max(dlin, std::abs(x[dm.node_dof(Field::Displacement, n, c)] -
                                     (a - 1.0) * X[c]));
  }

  bool ok = worst_traj <= kTrajTol && dphi <= kUniformTol &&
            dlam <= kUniformTol && dlin <= kUniformTol;
  return {ok, fmt("4x4 forward vs uniform reference: worst trajectory "
                  "difference %.3e <= %.1e; field uniformity (tol %.1e): "
                  "porosity spread %.3e, multiplier spread %.3e, displacement "
                  "nonlinearity %.3e (stretch %.6f)",
                  worst_traj, kTrajTol, kUniformTol, dphi, dlam, dlin, a)};
}

// ---- criterion 6: analytic Jacobians and constitutive derivatives ----------

double dof_scale(const FemProblem& p, int dof) {
  for (const auto& fs : p.dofmap.fields()) {
    int off = p.dofmap.offset(fs.field);
    if (dof < off || dof >= off + p.dofmap.count(fs.field)) continue;
    switch (fs.field) {
      case Field::Displacement: return 0.02;
      case Field::Porosity: return 0.005;
      case Field::Multiplier: return 50.0;
      case Field::Pressure: return 50.0;
      case Field::Velocity: return 1e-5;
    }
  }
  return 0.0;
}

double fd_jacobian_error(const FemProblem& p, const StepData& sd,
                         const Eigen::VectorXd& x) {
  const int n = p.dofmap.total();
  Eigen::VectorXd r(n);
  SparseMatrix jac(n, n);
  assemble_system(p, sd, x, r, &jac);
  if (!jac.finalized()) jac.finalize();
  Eigen::MatrixXd Ja = Eigen::MatrixXd(jac.compressed());

  Eigen::MatrixXd Jfd(n, n);
  Eigen::VectorXd xp = x;
  Eigen::VectorXd rp(n), rm(n);
  for (int j = 0; j < n; ++j) {
    double h = 1e-6 * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    assemble_system(p, sd, xp, rp, nullptr);
    xp[j] = x[j] - h;
    assemble_system(p, sd, xp, rm, nullptr);
    xp[j] = x[j];
    Jfd.col(j) = (rp - rm) / (2.0 * h);
  }
  return (Jfd - Ja).norm() / Ja.norm();
}

Mat<double, 3> random_deformation(std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (double spread = 0.2;; spread *= 0.5) {
    Mat<double, 3> F = Mat<double, 3>::identity();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) F(i, j) += spread * uni(rng);
    if (det(F) > 0.1) return F;
  }
}

Check criterion6() {
  constexpr double kJacTol = 1e-5;
  constexpr double kDerivTol = 1e-6;

  MaterialParams m;
  m.p_ref = 40.0;
  m.gravity = {100.0, -200.0, 50.0};
  Mesh two = build_square_mesh(1, 1, 1.0);
  Mesh four = build_square_mesh(2, 2, 1.0);
  double worst_jac = 0.0;
  unsigned seed = 4000;
  for (const Mesh* mesh : {&two, &four})
    for (auto kind : {ProblemKind::Forward, ProblemKind::Refconf})
      for (auto f :
           {Formulation::Primal, Formulation::MixedP, Formulation::MixedU}) {
        FemProblem p =
            FemProblem::create(*mesh, kind, f, m, sliding_bcs(mesh->dim));
        std::mt19937 rng(seed++);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        Eigen::VectorXd x = p.initial_state();
        for (int i = 0; i < x.size(); ++i) x[i] += dof_scale(p, i) * uni(rng);
        Eigen::VectorXd phi_prev(mesh->n_vertices());
        for (int v = 0; v < mesh->n_vertices(); ++v)
          phi_prev[v] = 0.1 + 0.004 * uni(rng);
        StepData sd;
        sd.dt = 0.01;
        sd.ramp = 0.7;
        sd.phi_prev = &phi_prev;
        worst_jac = std::max(worst_jac, fd_jacobian_error(p, sd, x));
      }

  MaterialParams aniso;
  aniso.b_ff = 2.0;
  aniso.b_ss = 0.6;
  aniso.b_nn = 1.3;
  aniso.b_fs = 0.9;
  aniso.b_fn = 1.1;
  aniso.b_sn = 0.4;
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> uphi(0.05, 0.45);
  double worst_piola = 0.0, worst_pp = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Mat<double, 3> F = random_deformation(rng);
    Mat<double, 3> P = piola_mech(F, aniso);
    Mat<double, 3> Pfd;
    double scale = 0.0, diff = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double h = 1e-6 * std::max(1.0, std::abs(F(i, j)));
        Mat<double, 3> Fp = F, Fm = F;
        Fp(i, j) += h;
        Fm(i, j) -= h;
        Pfd(i, j) = (psi_m(Fp, aniso) - psi_m(Fm, aniso)) / (2.0 * h);
        scale += Pfd(i, j) * Pfd(i, j);
        diff += (Pfd(i, j) - P(i, j)) * (Pfd(i, j) - P(i, j));
      }
    worst_piola = std::max(worst_piola, std::sqrt(diff / scale));

    double phi = uphi(rng);
    double h = 1e-6;
    double fd = (psi_p_d(phi + h, aniso) - psi_p_d(phi - h, aniso)) / (2.0 * h);
    worst_pp = std::max(worst_pp, std::abs(fd - psi_p_dd(phi, aniso)) /
                                      std::abs(fd));
  }

  bool ok = worst_jac < kJacTol && worst_piola <= kDerivTol &&
            worst_pp <= kDerivTol;
  return {ok, fmt("finite differences: worst Jacobian rel error %.3e < %.1e "
                  "over 12 kernel/mesh cases; worst stress derivative %.3e "
                  "and pressure derivative %.3e <= %.1e over 20 states",
                  worst_jac, kJacTol, worst_piola, worst_pp, kDerivTol)};
}

// ---- criterion 7: Anderson mixing unit behavior ----------------------------

Check criterion7() {
  constexpr double kExact = 1e-12;

  // scalar secant: g(x) = 1 + x/2 has fixed point 2
  std::vector<Eigen::VectorXd> xs = {Eigen::VectorXd::Constant(1, 0.0),
                                     Eigen::VectorXd::Constant(1, 1.0)};
  std::vector<Eigen::VectorXd> gs = {Eigen::VectorXd::Constant(1, 1.0),
                                     Eigen::VectorXd::Constant(1, 1.5)};
  Eigen::VectorXd w;
  bool fb = false;
  Eigen::VectorXd upd = anderson_update(xs, gs, 1, &w, &fb);
  double secant_err = std::abs(upd[0] - 2.0);
  bool ok1 = secant_err <= kExact && !fb && std::abs(w.sum() - 1.0) <= kExact;

  // affine map in R^5: depth-5 mixing must hit the fixed point in <= 6 steps
  const int n = 5;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    b[i] = uni(rng);
    for (int j = 0; j < n; ++j) A(i, j) = 0.18 * uni(rng);
  }
  Eigen::VectorXd xstar =
      (Eigen::MatrixXd::Identity(n, n) - A).partialPivLu().solve(b);
  AndersonAccelerator acc(n);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  int iters = 0;
  double err = 1e300;
  while (err > kExact && iters <= n + 1) {
    Eigen::VectorXd g = A * x + b;
    x = acc.propose(x, g, &fb);
    ++iters;
    err = (x - xstar).lpNorm<Eigen::Infinity>();
  }
  bool ok2 = err <= kExact && iters <= n + 1;

  // weights always sum to one and reproduce the proposed combination
  double worst_sum = 0.0, worst_combo = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Eigen::VectorXd> hx, hg;
    for (int i = 0; i < 4; ++i) {
      Eigen::VectorXd a(4), c(4);
      for (int k = 0; k < 4; ++k) {
        a[k] = uni(rng);
        c[k] = uni(rng);
      }
      hx.push_back(a);
      hg.push_back(c);
    }
    Eigen::VectorXd wt;
    Eigen::VectorXd next = anderson_update(hx, hg, 3, &wt, &fb);
    worst_sum = std::max(worst_sum, std::abs(wt.sum() - 1.0));
    Eigen::VectorXd combo = Eigen::VectorXd::Zero(4);
    for (int i = 0; i < 4; ++i) combo += wt[i] * hg[i];
    worst_combo =
        std::max(worst_combo, (combo - next).lpNorm<Eigen::Infinity>());
  }
  bool ok3 = worst_sum <= kExact && worst_combo <= 1e-11;

  return {ok1 && ok2 && ok3,
          fmt("secant error %.2e; R^5 affine fixed point reached in %d "
              "proposals (limit %d) with error %.2e; weight sums off by "
              "%.2e over 10 random histories (all <= %.0e)",
              secant_err, iters, n + 1, err, worst_sum, kExact)};
}

// ---- criterion 8: quadrature exactness and mesh volumes --------------------

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

Check criterion8() {
  constexpr double kTol = 1e-12;
  double worst = 0.0;
  for (int dim : {2, 3}) {
    QuadratureRule rule = quadrature(dim, 6);
    int rmax = dim == 3 ? 6 : 0;
    for (int p = 0; p <= 6; ++p)
      for (int q = 0; p + q <= 6; ++q)
        for (int r = 0; p + q + r <= rmax; ++r) {
          double s = 0.0;
          for (int i = 0; i < rule.size(); ++i) {
            const auto& pt = rule.points[i];
            s += rule.weights[i] * std::pow(pt[0], p) * std::pow(pt[1], q) *
                 (dim == 3 ? std::pow(pt[2], r) : 1.0);
          }
          double exact =
              dim == 2
                  ? factorial(p) * factorial(q) / factorial(p + q + 2)
                  : factorial(p) * factorial(q) * factorial(r) /
                        factorial(p + q + r + 3);
          worst = std::max(worst, std::abs(s - exact) / exact);
        }
  }
  // the classic anchor: integral of x^4 y^2 over the unit triangle
  QuadratureRule tri = quadrature(2, 6);
  double anchor = 0.0;
  for (int i = 0; i < tri.size(); ++i)
    anchor += tri.weights[i] * std::pow(tri.points[i][0], 4) *
              std::pow(tri.points[i][1], 2);
  double anchor_err = std::abs(anchor * 840.0 - 1.0);

  double vol2 = mesh_volume(build_square_mesh(7, 5, 2.5));
  double vol3 = mesh_volume(build_slab_mesh(3, 2, 4, {1.1, 0.7, 0.9}));
  double v2_err = std::abs(vol2 - 6.25) / 6.25;
  double v3_err = std::abs(vol3 - 0.693) / 0.693;

  Mesh big = build_square_mesh(16, 16, 1.0);
  int euler = big.n_vertices() - big.n_edges() + big.n_cells();

  bool ok = worst <= kTol && anchor_err <= kTol && v2_err <= kTol &&
            v3_err <= kTol && euler == 1;
  return {ok, fmt("degree-6 quadrature worst monomial rel error %.3e (anchor "
                  "840*I(x^4 y^2) - 1 = %.3e); mesh volumes off by %.3e / "
                  "%.3e; 16x16 Euler characteristic %d (all tol %.0e)",
                  worst, anchor_err, v2_err, v3_err, euler, kTol)};
}

// ---- criterion 9: discrete mass conservation without sources ---------------

double mass_integral(const Mesh& mesh, const Eigen::VectorXd& phi) {
  double total = 0.0;
  for (const auto& cell : mesh.cells) {
    const auto& a = mesh.vertices[cell[0]];
    const auto& b = mesh.vertices[cell[1]];
    const auto& c = mesh.vertices[cell[2]];
    double area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) -
                         (b[1] - a[1]) * (c[0] - a[0]));
    total += area * (phi[cell[0]] + phi[cell[1]] + phi[cell[2]]) / 3.0;
  }
  return total;
}

Check criterion9() {
  constexpr double kTol = 1e-10;
  constexpr int kSteps = 12;
  RunConfig base;
  base.nx = base.ny = 3;
  base.beta = {};
  base.p_source = {};
  base.gravity_y = -300.0;  // deforms the body so the check is not vacuous
  finalize_config(base);
  Mesh mesh = make_mesh(base);

  double worst = 0.0;
  for (const char* name : {"primal", "mixed_p", "mixed_u"}) {
    RunConfig cfg = base;
    cfg.formulation = name;
    FemProblem p = make_problem(cfg, mesh, ProblemKind::Forward);
    TimeStepperOptions opt = to_stepper_options(cfg);
    Eigen::VectorXd x = p.initial_state();
    Eigen::VectorXd phi_prev = p.porosity(x);
    const double m0 = mass_integral(mesh, phi_prev);
    for (int s = 1; s <= kSteps; ++s) {
      StepData sd;
      sd.dt = cfg.dt;
      sd.ramp = ramp_factor(s * cfg.dt, cfg.t_ramp);
      sd.phi_prev = &phi_prev;
      time_step(p, sd, x, opt.newton);
      phi_prev = p.porosity(x);
      worst = std::max(worst,
                       std::abs(mass_integral(mesh, phi_prev) - m0) /
                           std::abs(m0));
    }
  }
  return {worst <= kTol,
          fmt("theta = 0 forward stepping under gravity: integral of the "
              "Lagrangian porosity drifts by at most %.3e relative over %d "
              "steps x 3 formulations (tol %.0e)",
              worst, kSteps, kTol)};
}

}  // namespace

int main(int argc, char** argv) {
  int which = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      which = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 1;
    }
  }
  if (which < 0 || which > 9) {
    std::fprintf(stderr, "no such criterion: %d\n", which);
    return 1;
  }

  Check (*const criteria[9])() = {criterion1, criterion2, criterion3,
                                  criterion4, criterion5, criterion6,
                                  criterion7, criterion8, criterion9};
  int failures = 0;
  for (int n = 1; n <= 9; ++n) {
    if (which != 0 && which != n) continue;
    Check c;
    try {
      c = criteria[n - 1]();
    } catch (const std::exception& e) {
      c = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d: %s\n", c.ok ? "PASS" : "FAIL", n,
                c.detail.c_str());
    std::fflush(stdout);
    failures += c.ok ? 0 : 1;
  }
  return failures;
}
