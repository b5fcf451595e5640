#pragma once

#include <cstdint>
#include <vector>

#include "renyi/solver.hpp"

namespace renyi {

// Desk-scale restriction of the constrained problem to a finite simplex,
// used to cross-check the dual solver by direct search.
struct SimplexProblem {
  std::vector<double> support;   // strictly increasing, 2..32 points
  std::vector<double> q_masses;  // positive, sum to one
  double alpha;
  Constraint constraint;
  double m;
};

struct OracleResult {
  std::vector<double> p;
  double divergence;
  std::uint64_t seed;
  int best_start;
};

// Projected multi-start local search over the simplex. Every iterate is
// kept exactly feasible: classical means by three-point null-space moves,
// generalized means by re-solving an exponential tilt after each step.
// Deterministic for a fixed seed.
OracleResult brute_force_solve(const SimplexProblem& prob, int iters,
                               std::uint64_t seed = 20240901ULL);

}  // namespace renyi
