#pragma once

#include <cstddef>
#include <functional>

namespace renyi {

// A function value in log scale: value = sign * exp(log_abs).
// sign == 0 (with log_abs == -inf) encodes an exact zero.
struct LogVal {
  double log_abs;
  double sign;
};

struct QuadResult {
  double log_abs;        // log |integral|
  double sign;           // -1, 0, +1
  double est_abs_error;  // error estimate relative to the scaled integrand peak
  std::size_t panels;
};

using LogIntegrand = std::function<LogVal(double)>;

// Adaptive Gauss-Kronrod 7-15 on [a, b] for an integrand supplied in log
// scale. Accumulation happens relative to the integrand's peak so that
// integrals far outside double range still evaluate. No node is ever placed
// on a panel edge, so integrable endpoint singularities that the caller has
// already tamed by substitution are safe. Throws NumericalFailure when the
// panel budget is exhausted before the tolerances are met.
QuadResult integrate_log(const LogIntegrand& f, double a, double b,
                         double abs_tol = 1e-12, double rel_tol = 1e-10,
                         std::size_t max_panels = std::size_t(1) << 20);

}  // namespace renyi
