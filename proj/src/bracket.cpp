#include "renyi/bracket.hpp"

#include <cmath>
#include <limits>

#include "renyi/errors.hpp"

namespace renyi {

MaxResult maximize_bracketed(const std::function<double(double)>& f, double lo,
                             double hi, double xtol_rel, double xtol_abs) {
  if (!(lo < hi)) throw NumericalFailure("maximize: empty bracket");
  const double golden = 0.3819660112501051;
  const int max_iter = 200;
  int evals = 0;
  auto eval = [&](double x) {
    ++evals;
    double v = f(x);
    if (std::isnan(v)) throw NumericalFailure("maximize: objective returned nan");
    return v;
  };

  double a = lo, b = hi;
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = eval(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  bool converged = false;

  for (int iter = 0; iter < max_iter; ++iter) {
    double m = 0.5 * (a + b);
    double tol = xtol_rel * std::fabs(x) + xtol_abs;
    double tol2 = 2.0 * tol;
    if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) {
      converged = true;
      break;
    }
    bool use_golden = true;
    if (std::fabs(e) > tol && std::isfinite(fx) && std::isfinite(fw) && std::isfinite(fv)) {
      // Parabola through x, w, v (maximization: flip the usual signs).
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      double etemp = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * etemp) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol : -tol;
        use_golden = false;
      }
    }
    if (use_golden) {
      e = (x < m) ? (b - x) : (a - x);
      d = golden * e;
    }
    double u = (std::fabs(d) >= tol) ? (x + d) : (x + (d > 0 ? tol : -tol));
    double fu = eval(u);
    if (fu >= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu >= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu >= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, fx, converged, evals};
}

RootResult find_root(const std::function<double(double)>& g, double lo,
                     double hi, double xtol_rel, double xtol_abs, int max_iter) {
  double a = lo, b = hi;
  double fa = g(a), fb = g(b);
  if (fa == 0.0) return {a, 0.0, true};
  if (fb == 0.0) return {b, 0.0, true};
  if (std::isnan(fa) || std::isnan(fb) || (fa > 0) == (fb > 0))
    throw NumericalFailure("find_root: endpoints do not bracket a sign change");

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0) == (fc > 0)) {
      c = a; fc = fa;
      d = b - a; e = d;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double tol = 2.0 * xtol_rel * std::fabs(b) + xtol_abs;
    double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol || fb == 0.0) return {b, fb, true};
    if (std::fabs(e) < tol || std::fabs(fa) <= std::fabs(fb)) {
      d = m; e = m;
    } else {
      double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        double qq = fa / fc;
        double r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
        e = d; d = p / q;
      } else {
        d = m; e = m;
      }
    }
    a = b; fa = fb;
    b += (std::fabs(d) > tol) ? d : (m > 0 ? tol : -tol);
    fb = g(b);
    if (std::isnan(fb)) throw NumericalFailure("find_root: function returned nan");
  }
  return {b, fb, false};
}

}  // namespace renyi
