#include "renyi/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "renyi/accum.hpp"
#include "renyi/errors.hpp"
#include "renyi/quadrature.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxIter = 20000;

double log_upper_cf(double s, double x) {
  return -x + s * std::log(x) + log_gamma_upper_cf_factor(s, x);
}

// Series for the regularized lower part, valid for s > 0, x < s + 1.
// Returns log Gamma(s, x) through Gamma(s) (1 - P(s, x)).
double log_upper_via_lower(double s, double x) {
  double ap = s;
  double sum = 1.0 / s;
  double del = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-17) {
      double log_p = -x + s * std::log(x) + std::log(sum) - std::lgamma(s);
      if (log_p >= 0.0) throw NumericalFailure("incomplete gamma: lower series lost precision");
      return std::lgamma(s) + std::log1p(-std::exp(log_p));
    }
  }
  throw NumericalFailure("incomplete gamma: lower series stalled");
}

// Direct evaluation on 0 < x < 1 for noninteger s in (0, 1), arranged so the
// near-pole behaviour at s -> 0 cancels analytically:
//   Gamma(s, x) = Gamma(1+s) (-expm1(s ln x - lgamma(1+s))) / s
//                 - x^s sum_{k>=1} (-x)^k / (k! (s + k)).
double upper_unit_interval(double s, double x) {
  double lx = std::log(x);
  double lg1 = std::lgamma(1.0 + s);
  double y = s * lx - lg1;
  double head;
  if (std::fabs(y) < 1e-3) {
    double y_over_s = lx - lg1 / s;
    head = -y_over_s * std::exp(lg1) * (1.0 + y * (0.5 + y * (1.0 / 6.0 + y / 24.0)));
  } else {
    head = -std::expm1(y) * std::exp(lg1) / s;
  }
  double tail = 0.0;
  double t = 1.0;
  for (int k = 1; k < 200; ++k) {
    t *= -x / k;
    double contrib = t / (s + k);
    tail += contrib;
    if (std::fabs(contrib) < 1e-18 * (1.0 + std::fabs(tail))) break;
  }
  return head - std::exp(s * lx) * tail;
}

// For negative s the continued fraction needs x to dwarf |s| before it
// reaches full accuracy. Substituting t = x (1 + v) in the tail integral
// gives Gamma(s, x) = x^s e^{-x} int_0^inf (1+v)^{s-1} e^{-x v} dv with a
// monotone integrand, which the adaptive panels resolve to full precision.
double log_upper_quad(double s, double x) {
  auto f = [&](double v) -> LogVal {
    return {(s - 1.0) * std::log1p(v) - x * v, 1.0};
  };
  double v_hi = (800.0 + 2.0 * std::fabs(s)) / x + 10.0;
  QuadResult r = integrate_log(f, 0.0, v_hi, 1e-14, 1e-13);
  return -x + s * std::log(x) + r.log_abs;
}

}  // namespace

bool gamma_upper_cf_ok(double s, double x) {
  return s >= 0.0 && x >= 1.0 && x >= s + 1.0;
}

// Modified Lentz evaluation of the factor h in Gamma(s, x) = e^{-x} x^s h.
double log_gamma_upper_cf_factor(double s, double x) {
  const double fpmin = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) {
      if (h <= 0.0) throw NumericalFailure("incomplete gamma: nonpositive continued fraction");
      return std::log(h);
    }
  }
  throw NumericalFailure("incomplete gamma: continued fraction stalled");
}

double exp1_small(double x) {
  // E1(x) = -gamma_E - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!), for x < 1.
  const double gamma_e = 0.57721566490153286;
  double sum = 0.0;
  double t = 1.0;
  for (int k = 1; k < 100; ++k) {
    t *= -x / k;
    sum -= t / k;
    if (std::fabs(t) < 1e-18 * (1.0 + std::fabs(sum))) break;
  }
  return -gamma_e - std::log(x) + sum;
}

double log_gamma_upper(double s, double x) {
  if (std::isnan(s) || std::isnan(x) || x < 0.0)
    throw NumericalFailure("incomplete gamma: bad arguments");
  if (x == 0.0) {
    if (s > 0.0) return std::lgamma(s);
    return kInf;
  }
  if (gamma_upper_cf_ok(s, x)) return log_upper_cf(s, x);
  if (s <= 0.0 && x >= 1.0) return log_upper_quad(s, x);
  if (s > 0.0 && x >= 1.0) return log_upper_via_lower(s, x);
  // From here 0 < x < 1.
  if (s >= 1.0) return log_upper_via_lower(s, x);

  double lx = std::log(x);
  double nearest = std::round(s);
  bool integer_path = (nearest <= 0.0) && (std::fabs(s - nearest) < 1e-11);
  double sigma;      // current ladder order
  double log_val;    // log Gamma(sigma, x)
  if (integer_path) {
    s = nearest;
    sigma = 0.0;
    log_val = std::log(exp1_small(x));
  } else if (s > 0.0) {
    return std::log(upper_unit_interval(s, x));
  } else {
    sigma = s - std::floor(s);  // fractional start in (0, 1)
    if (sigma <= 0.9) {
      log_val = std::log(upper_unit_interval(sigma, x));
    } else {
      // Start one rung higher where the series has no cancellation, then
      // step down once: Gamma(sigma, x) = (Gamma(sigma+1, x) - x^sigma e^-x) / sigma.
      double upper = log_upper_via_lower(sigma + 1.0, x);
      double a = sigma * lx - x;
      if (a >= upper) throw NumericalFailure("incomplete gamma: ladder entry lost precision");
      log_val = upper + std::log1p(-std::exp(a - upper)) - std::log(sigma);
    }
  }
  // Downward ladder: Gamma(sigma - 1, x) = (x^{sigma-1} e^-x - Gamma(sigma, x)) / (1 - sigma).
  int steps = static_cast<int>(std::lround(sigma - s));
  for (int j = 0; j < steps; ++j) {
    double denom = 1.0 - sigma;
    double a = (sigma - 1.0) * lx - x;
    if (log_val >= a) throw NumericalFailure("incomplete gamma: ladder step lost precision");
    log_val = a + std::log1p(-std::exp(log_val - a)) - std::log(denom);
    sigma -= 1.0;
  }
  return log_val;
}

bool grow_asym_ok(double s, double y) { return y > 2.0 * s + 60.0; }

// Factor S in int_0^y t^{s-1} e^t dt = y^{s-1} e^y S, with
// S = sum_j c_j, c_0 = 1, c_{j+1} = c_j (j + 1 - s)/y (integration by parts
// alternates the sign: I(s) = y^{s-1} e^y - (s-1) I(s-1)). The lower end of
// the integral contributes O(e^-y) relative error, negligible where this is
// used.
double log_grow_asym_factor(double s, double y) {
  double c = 1.0;
  double sum = 1.0;
  for (int j = 0; j < 200; ++j) {
    double next = c * (j + 1.0 - s) / y;
    if (std::fabs(next) >= std::fabs(c)) break;
    sum += next;
    c = next;
    if (std::fabs(c) < 1e-18 * std::fabs(sum)) break;
  }
  if (sum <= 0.0) throw NumericalFailure("grow integral: asymptotic sum nonpositive");
  return std::log(sum);
}

double log_grow_integral(double s, double y) {
  if (!(s > 0.0) || !(y > 0.0))
    throw NumericalFailure("grow integral: requires s > 0 and y > 0");
  if (grow_asym_ok(s, y))
    return (s - 1.0) * std::log(y) + y + log_grow_asym_factor(s, y);
  // Term series: sum_k y^{s+k} / (k! (s+k)), accumulated in log scale.
  double ly = std::log(y);
  SignedLogSum acc;
  double lfact = 0.0;
  for (int k = 0; k < 200000; ++k) {
    if (k > 0) lfact += std::log(static_cast<double>(k));
    double lt = (s + k) * ly - lfact - std::log(s + k);
    acc.add(lt);
    if (k > y && lt - acc.log_abs() < -40.0) return acc.log_abs();
  }
  throw NumericalFailure("grow integral: series stalled");
}

}  // namespace renyi
