#pragma once

#include <string>
#include <vector>

#include "renyi/measures.hpp"
#include "renyi/solver.hpp"

namespace cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

// "uniform:a,b" | "exponential:beta" | "bernoulli:beta" | "poisson:mu"
// | "tabulated:path.csv" | "gridded:path.csv". Throws renyi::ConfigError.
renyi::ReferenceMeasure parse_measure(const std::string& spec);

// "lo:hi:n" with n >= 2, endpoints included.
std::vector<double> parse_grid(const std::string& spec);

// Comma-separated list of reals.
std::vector<double> parse_reals(const std::string& spec);

renyi::Constraint parse_constraint(const std::string& s);
std::string constraint_name(renyi::Constraint c);

// Options shared by the solving subcommands, bound to CLI11 flags in main.
struct CommonOpts {
  std::string measure;
  std::string constraint = "C";
  std::string alpha = "2";
  int kmax = 64;
  std::string out;          // empty = stdout
  std::string format = "csv";
};

struct SolveOpts {
  CommonOpts common;
  double m = 0.0;
  std::string density_out;   // optional density table
  std::string density_grid;  // lo:hi:n for the table (continuous kinds)
};

struct CurveOpts {
  CommonOpts common;
  std::string m_grid;  // lo:hi:n; empty = default grid with 33 points
  int grid_points = 33;
};

struct TraceOpts {
  CommonOpts common;
  double m = 0.0;
  std::string gamma_grid = "-1:2:301";
};

struct BregmanOpts {
  CommonOpts common;
  double m1 = 0.0;
  double m2 = 0.0;
};

struct CheckOpts {
  std::uint64_t seed = 20240901ULL;
  double tol_scale = 1.0;
  bool quick = false;
  std::string format = "text";
};

int run_solve(const SolveOpts& o);
int run_curve(const CurveOpts& o);
int run_dual_trace(const TraceOpts& o);
int run_bregman(const BregmanOpts& o);
int run_check(const CheckOpts& o);

}  // namespace cli
