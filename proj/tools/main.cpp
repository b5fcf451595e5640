#include <CLI11.hpp>

#include "cli_common.hpp"

namespace {

void add_common(CLI::App* cmd, cli::CommonOpts& c) {
  cmd->add_option("--measure", c.measure,
                  "kind:params, e.g. uniform:0,1 exponential:1 bernoulli:0.5 "
                  "poisson:3 tabulated:path.csv gridded:path.csv")
      ->required();
  cmd->add_option("--constraint", c.constraint, "C (classical) or G (generalized)");
  cmd->add_option("--alpha", c.alpha, "order, or comma list where allowed");
  cmd->add_option("--kmax", c.kmax, "pole-bounded segment budget per sign");
  cmd->add_option("--out", c.out, "output path (default stdout)");
  cmd->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum-entropy solver for Renyi divergence under mean constraints"};
  app.set_config("--config", "",
                 "key=value config file with [subcommand] sections; command-line "
                 "flags win");
  app.require_subcommand(1);

  cli::SolveOpts so;
  CLI::App* solve = app.add_subcommand("solve", "solve one constrained problem");
  add_common(solve, so.common);
  solve->add_option("--m", so.m, "target mean")->required();
  solve->add_option("--density-out", so.density_out,
                    "write the optimal density table to this CSV");
  solve->add_option("--density-grid", so.density_grid,
                    "lo:hi:n grid for the density table (continuous kinds)");

  cli::CurveOpts co;
  CLI::App* curve = app.add_subcommand("curve", "entropy functional over an m grid");
  add_common(curve, co.common);
  curve->add_option("--m-grid", co.m_grid, "lo:hi:n target-mean grid");
  curve->add_option("--grid-points", co.grid_points,
                    "point count for the default grid when --m-grid is absent");

  cli::TraceOpts to;
  CLI::App* trace = app.add_subcommand("dual-trace", "dual objective over a gamma grid");
  add_common(trace, to.common);
  trace->add_option("--m", to.m, "target mean")->required();
  trace->add_option("--gamma-grid", to.gamma_grid, "lo:hi:n gamma grid");

  cli::BregmanOpts bo;
  CLI::App* breg = app.add_subcommand("bregman",
                                      "object-space divergence between mean levels");
  add_common(breg, bo.common);
  breg->add_option("--m1", bo.m1, "base mean level")->required();
  breg->add_option("--m2", bo.m2, "argument mean level")->required();

  cli::CheckOpts ko;
  CLI::App* check = app.add_subcommand("check", "run the verification suite");
  check->add_option("--seed", ko.seed, "RNG seed for the randomized checks");
  check->add_option("--tol-scale", ko.tol_scale,
                    "multiplies every pass tolerance (tiny values force failures)");
  check->add_flag("--quick", ko.quick, "trimmed sample counts");
  check->add_option("--format", ko.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  if (solve->parsed()) return cli::run_solve(so);
  if (curve->parsed()) return cli::run_curve(co);
  if (trace->parsed()) return cli::run_dual_trace(to);
  if (breg->parsed()) return cli::run_bregman(bo);
  if (check->parsed()) return cli::run_check(ko);
  return cli::kExitConfig;
}
