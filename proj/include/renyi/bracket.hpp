#pragma once

#include <functional>

namespace renyi {

struct MaxResult {
  double x;
  double value;
  bool converged;
  int evals;
};

// Golden-section search with parabolic acceleration for a maximum of f on
// (lo, hi). The endpoints are never evaluated; the iteration cap is 200.
// Function values of -inf are allowed and simply repel the search.
MaxResult maximize_bracketed(const std::function<double(double)>& f, double lo,
                             double hi, double xtol_rel = 1e-11,
                             double xtol_abs = 1e-13);

struct RootResult {
  double x;
  double residual;
  bool converged;
};

// Brent-style root bracketing refinement for g with g(lo) and g(hi) of
// opposite sign (or zero at an end).
RootResult find_root(const std::function<double(double)>& g, double lo,
                     double hi, double xtol_rel = 1e-14, double xtol_abs = 1e-15,
                     int max_iter = 200);

}  // namespace renyi
