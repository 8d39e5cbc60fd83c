#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "poro/config.hpp"
#include "poro/errors.hpp"
#include "poro/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stress-free reference configurations of nonlinear poroelastic "
               "bodies, and the forward problem for round-trip verification"};
  app.require_subcommand(1);

  std::string config_path, out_dir, formulation;
  int aa_depth = -1;
  double tol = -1.0;
  int mesh_n = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file (key = value)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--formulation", formulation,
                    "primal | mixed_p | mixed_u");
    sub->add_option("--aa-depth", aa_depth,
                    "Anderson acceleration depth (m = 0 disables)");
    sub->add_option("--tol", tol, "relative stationarity tolerance");
    sub->add_option("--mesh-n", mesh_n,
                    "elements along x (and along y for the 2D square)");
  };

  CLI::App* cmd_forward =
      app.add_subcommand("forward", "forward problem to its stationary state");
  CLI::App* cmd_refconf = app.add_subcommand(
      "refconf", "reference configuration from the loaded state");
  CLI::App* cmd_roundtrip = app.add_subcommand(
      "roundtrip", "refconf, then forward on the computed reference mesh");
  CLI::App* cmd_sweep = app.add_subcommand(
      "aa-sweep", "stationary runs over the configured aa_depth list");
  CLI::App* cmd_oracle = app.add_subcommand(
      "oracle", "spatially uniform reference trajectory (no FE)");
  for (CLI::App* sub :
       {cmd_forward, cmd_refconf, cmd_roundtrip, cmd_sweep, cmd_oracle}) {
    add_common(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // bad flags are configuration errors
  }

  try {
    poro::RunConfig cfg;
    if (!config_path.empty()) {
      cfg = poro::parse_config(config_path);
    } else {
      poro::finalize_config(cfg);
    }
    if (!out_dir.empty()) cfg.out = out_dir;
    if (!formulation.empty()) cfg.formulation = formulation;
    if (aa_depth >= 0) cfg.aa_depth = {aa_depth};
    if (tol > 0) cfg.tol = tol;
    if (mesh_n > 0) {
      cfg.nx = mesh_n;
      if (cfg.dim == 2) cfg.ny = mesh_n;
    }
    poro::finalize_config(cfg);

    if (cmd_forward->parsed()) return poro::run_forward(cfg);
    if (cmd_refconf->parsed()) return poro::run_refconf(cfg);
    if (cmd_roundtrip->parsed()) return poro::run_roundtrip(cfg);
    if (cmd_sweep->parsed()) return poro::run_aa_sweep(cfg);
    return poro::run_oracle(cfg);
  } catch (const poro::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const poro::DimensionMismatchError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const poro::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 2;
  }
}
