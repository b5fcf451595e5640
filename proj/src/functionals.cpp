#include "renyi/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

#include "renyi/accum.hpp"
#include "renyi/bracket.hpp"
#include "renyi/errors.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double base_u(double gamma, double x, double xbar) {
  return 1.0 + gamma * (x - xbar);
}

}  // namespace

MaxEntDistribution family_member(const ReferenceMeasure& q, double nu,
                                 double gamma, double xbar) {
  PartitionEval z = partition_z(q, nu, gamma, xbar);
  if (z.infinite) {
    throw DivergentIntegral("family member has a divergent normalizer");
  }
  MaxEntDistribution d;
  d.q = q;
  d.nu = nu;
  d.gamma = gamma;
  d.xbar = xbar;
  d.log_z = z.log_value;
  d.domain = effective_domain(q, gamma, xbar);
  return d;
}

MaxEntDistribution maxent_distribution(const ReferenceMeasure& q, Constraint c,
                                       double alpha, double m, int kmax) {
  DualSolution sol = solve_constraint(q, c, alpha, m, kmax);
  double nu = primal_exponent(c, alpha);
  return family_member(q, nu, sol.gamma_star, m);
}

double log_density_ratio(const MaxEntDistribution& d, double x) {
  if (x < d.domain.lo - 1e-12 * (1.0 + std::fabs(d.domain.lo)) ||
      x > d.domain.hi + 1e-12 * (1.0 + std::fabs(d.domain.hi))) {
    return -kInf;
  }
  if (d.gamma == 0.0) return -d.log_z;
  double u = base_u(d.gamma, x, d.xbar);
  if (u <= 0.0) {
    if (d.nu > 0.0) return -kInf;
    if (d.nu == 0.0) return -d.log_z;
    return -kInf;  // boundary null set for negative exponents
  }
  return d.nu * std::log(u) - d.log_z;
}

double density(const MaxEntDistribution& d, double x) {
  double lq = d.q.log_q(x);
  if (lq == -kInf) return 0.0;
  double lr = log_density_ratio(d, x);
  if (lr == -kInf) return 0.0;
  return std::exp(lq + lr);
}

double classical_mean(const MaxEntDistribution& d) {
  return mean_under(d.q, d.nu, d.gamma, d.xbar);
}

double generalized_mean(const MaxEntDistribution& d, double alpha) {
  return mean_under(d.q, alpha * d.nu, d.gamma, d.xbar);
}

MaxEntDistribution escort_of(const MaxEntDistribution& d, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("escort order must be positive");
  return family_member(d.q, alpha * d.nu, d.gamma, d.xbar);
}

namespace {

// Intersection of the reference support with {u_i > 0} for every factor.
void intersect_domain(const std::vector<PowerFactor>& fs, double& lo,
                      double& hi) {
  for (const PowerFactor& f : fs) {
    if (f.gamma > 0.0) {
      lo = std::max(lo, f.xbar - 1.0 / f.gamma);
    } else if (f.gamma < 0.0) {
      hi = std::min(hi, f.xbar + 1.0 / (-f.gamma));
    }
  }
}

double factor_log_sum(const std::vector<PowerFactor>& fs, double x,
                      bool& excluded) {
  double s = 0.0;
  excluded = false;
  for (const PowerFactor& f : fs) {
    if (f.expo == 0.0) continue;
    double u = base_u(f.gamma, x, f.xbar);
    if (u <= 0.0) {
      excluded = true;
      return 0.0;
    }
    s += f.expo * std::log(u);
  }
  return s;
}

}  // namespace

LogVal log_expect_product(const ReferenceMeasure& q,
                          const std::vector<PowerFactor>& factors) {
  SupportDesc sup = q.support();
  double lo = sup.lower;
  double hi = sup.upper;
  intersect_domain(factors, lo, hi);
  if (!(lo < hi || (q.is_discrete() && lo <= hi))) {
    throw EmptyDomain("product expectation over an empty set");
  }

  if (q.is_discrete()) {
    SignedLogSum acc;
    if (q.kind == MeasureKind::Poisson) {
      double fuzz = 1e-9;
      long k0 = static_cast<long>(std::ceil(lo - fuzz));
      if (k0 < 0) k0 = 0;
      double khi = std::isfinite(hi) ? std::floor(hi + fuzz) : kInf;
      double lmu = std::log(q.mu);
      double soft = q.mu + 10.0 * std::sqrt(q.mu) + 10.0;
      double prev = kInf;
      for (long k = k0;; ++k) {
        double kx = static_cast<double>(k);
        if (kx > khi) break;
        bool ex = false;
        double fl = factor_log_sum(factors, kx, ex);
        double lt = ex ? -kInf : kx * lmu - std::lgamma(kx + 1.0) - q.mu + fl;
        if (lt > -kInf) acc.add(lt, 1.0);
        if (kx > soft && lt < prev && !acc.zero() &&
            lt - acc.log_abs() < -45.0) {
          break;
        }
        prev = lt;
        if (k - k0 > 1000000) {
          throw NumericalFailure("product expectation series did not settle");
        }
      }
      if (acc.zero()) return {-kInf, 0.0};
      return {acc.log_abs(), acc.sign()};
    }
    std::vector<double> xs = q.atom_xs();
    std::vector<double> ws = q.atom_masses();
    double fuzz = 1e-12 * (1.0 + std::fabs(lo) + std::fabs(hi));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] < lo - fuzz || xs[i] > hi + fuzz) continue;
      bool ex = false;
      double fl = factor_log_sum(factors, xs[i], ex);
      if (ex) continue;
      acc.add(std::log(ws[i]) + fl, 1.0);
    }
    if (acc.zero()) return {-kInf, 0.0};
    return {acc.log_abs(), acc.sign()};
  }

  if (std::isinf(hi)) {
    // Exponential reference: truncate where the integrand is negligible.
    double growth = 0.0;
    for (const PowerFactor& f : factors) {
      if (f.expo > 0.0 && f.gamma != 0.0) growth += f.expo;
    }
    double span = (900.0 + 100.0 * growth) / q.beta;
    hi = lo + span;
  }
  auto f = [&](double x) -> LogVal {
    bool ex = false;
    double fl = factor_log_sum(factors, x, ex);
    if (ex) return {-kInf, 0.0};
    double lq = q.log_q(x);
    if (lq == -kInf) return {-kInf, 0.0};
    return {lq + fl, 1.0};
  };
  QuadResult r = integrate_log(f, lo, hi);
  return {r.log_abs, r.sign};
}

namespace {

// E_d[f(X)] for a family member, f real-valued and modest.
double expectation(const MaxEntDistribution& d,
                   const std::function<double(double)>& f) {
  const ReferenceMeasure& q = d.q;
  double lo = d.domain.lo;
  double hi = d.domain.hi;
  if (q.is_discrete()) {
    SignedLogSum acc;
    if (q.kind == MeasureKind::Poisson) {
      long k0 = static_cast<long>(std::ceil(lo - 1e-9));
      if (k0 < 0) k0 = 0;
      double khi = std::isfinite(hi) ? std::floor(hi + 1e-9) : kInf;
      double lmu = std::log(q.mu);
      double soft = q.mu + 10.0 * std::sqrt(q.mu) + 10.0;
      double prev = kInf;
      for (long k = k0;; ++k) {
        double kx = static_cast<double>(k);
        if (kx > khi) break;
        double lr = log_density_ratio(d, kx);
        double lt = lr == -kInf
                        ? -kInf
                        : kx * lmu - std::lgamma(kx + 1.0) - q.mu + lr;
        if (lt > -kInf) {
          double v = f(kx);
          if (v != 0.0) acc.add(lt + std::log(std::fabs(v)),
                                v > 0.0 ? 1.0 : -1.0);
        }
        if (kx > soft && lt < prev && lt < -60.0 + (acc.zero() ? 0.0 : acc.log_abs())) {
          break;
        }
        prev = lt;
        if (k - k0 > 1000000) {
          throw NumericalFailure("expectation series did not settle");
        }
      }
      return acc.zero() ? 0.0 : acc.value();
    }
    std::vector<double> xs = q.atom_xs();
    std::vector<double> ws = q.atom_masses();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double lr = log_density_ratio(d, xs[i]);
      if (lr == -kInf) continue;
      double v = f(xs[i]);
      if (v == 0.0) continue;
      acc.add(std::log(ws[i]) + lr + std::log(std::fabs(v)),
              v > 0.0 ? 1.0 : -1.0);
    }
    return acc.zero() ? 0.0 : acc.value();
  }
  if (std::isinf(hi)) {
    double growth = d.nu > 0.0 ? d.nu : 0.0;
    hi = lo + (900.0 + 100.0 * growth) / q.beta;
  }
  auto g = [&](double x) -> LogVal {
    double lq = q.log_q(x);
    double lr = log_density_ratio(d, x);
    if (lq == -kInf || lr == -kInf) return {-kInf, 0.0};
    double v = f(x);
    if (v == 0.0) return {-kInf, 0.0};
    return {lq + lr + std::log(std::fabs(v)), v > 0.0 ? 1.0 : -1.0};
  };
  QuadResult r = integrate_log(g, lo, hi);
  return r.sign == 0.0 ? 0.0 : r.sign * std::exp(r.log_abs);
}

}  // namespace

double renyi_divergence_to_ref(const MaxEntDistribution& p, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("divergence order must be positive");
  if (alpha == 1.0) {
    // Kullback form: E_P[log dP/dQ].
    double elog = expectation(
        p, [&](double x) { return log_density_ratio(p, x); });
    return elog;
  }
  PartitionEval za = partition_z(p.q, alpha * p.nu, p.gamma, p.xbar);
  if (za.infinite) {
    throw DivergentIntegral("escort normalizer diverges at this order");
  }
  return (za.log_value - alpha * p.log_z) / (alpha - 1.0);
}

double renyi_divergence(const MaxEntDistribution& p1,
                        const MaxEntDistribution& p2, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("divergence order must be positive");
  double slack = 1e-12 * (1.0 + std::fabs(p2.domain.lo) + std::fabs(p2.domain.hi));
  if (p1.domain.lo < p2.domain.lo - slack ||
      p1.domain.hi > p2.domain.hi + slack) {
    throw AbsoluteContinuityViolated(
        "first distribution carries mass outside the second's domain");
  }
  if (alpha == 1.0) {
    return expectation(p1, [&](double x) {
      return log_density_ratio(p1, x) - log_density_ratio(p2, x);
    });
  }
  std::vector<PowerFactor> fs = {
      {alpha * p1.nu, p1.gamma, p1.xbar},
      {(1.0 - alpha) * p2.nu, p2.gamma, p2.xbar},
  };
  LogVal I = log_expect_product(p1.q, fs);
  if (I.sign <= 0.0) {
    throw NumericalFailure("divergence integral lost positivity");
  }
  double logI = I.log_abs - alpha * p1.log_z - (1.0 - alpha) * p2.log_z;
  return logI / (alpha - 1.0);
}

double renyi_divergence_masses(const std::vector<double>& p,
                               const std::vector<double>& q, double alpha) {
  if (p.size() != q.size()) {
    throw ConfigError("mass vectors must share a support");
  }
  if (!(alpha > 0.0)) throw ConfigError("divergence order must be positive");
  if (alpha == 1.0) {
    KahanSum s;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] <= 0.0) continue;
      if (q[i] <= 0.0) {
        throw AbsoluteContinuityViolated("p has mass where q vanishes");
      }
      s.add(p[i] * std::log(p[i] / q[i]));
    }
    return s.value();
  }
  SignedLogSum acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) {
      if (alpha > 1.0) {
        throw AbsoluteContinuityViolated("p has mass where q vanishes");
      }
      continue;
    }
    acc.add(alpha * std::log(p[i]) + (1.0 - alpha) * std::log(q[i]), 1.0);
  }
  if (acc.zero()) throw NumericalFailure("divergence sum vanished");
  return acc.log_abs() / (alpha - 1.0);
}

namespace {

// With an upper-unbounded reference, a classical constraint at alpha < 1
// (or a generalized one at alpha > 1) can push the surplus mean into a
// vanishing far-out mass at vanishing divergence cost, so the infimum above
// the reference mean is zero and unattained.
bool zero_escape_regime(const ReferenceMeasure& q, Constraint c, double alpha,
                        double m) {
  if (std::isfinite(q.support().upper)) return false;
  if (!(m > q.mean_q())) return false;
  return (c == Constraint::Classical && alpha < 1.0) ||
         (c == Constraint::Generalized && alpha > 1.0);
}

}  // namespace

FunctionalPoint entropy_functional(const ReferenceMeasure& q, Constraint c,
                                   double alpha, double m, int kmax) {
  AlphaIndex idx = make_alpha_index(alpha);
  FunctionalPoint pt;
  pt.m = m;
  pt.regime_flag = kRegimeInterior;
  pt.converged = false;
  pt.diagnostic.clear();

  if (idx.is_limit) {
    Alpha1Value v = limit_alpha1(q, c, m);
    pt.value = v.value;
    pt.gamma_star = v.tilt;
    pt.nu = kNaN;
    pt.achieved_mean = m;
    pt.regime_flag = v.regime_flag;
    pt.converged = true;
    return pt;
  }

  if (zero_escape_regime(q, c, alpha, m)) {
    // The dual escapes to gamma -> 0 (for the Poisson reference through the
    // pole accumulation): the infimum is zero but unattained.
    pt.value = 0.0;
    pt.gamma_star = kNaN;
    pt.nu = primal_exponent(c, alpha);
    pt.achieved_mean = kNaN;
    pt.regime_flag = kRegimeZeroEscape;
    pt.converged = true;
    return pt;
  }

  DualSolution sol = solve_constraint(q, c, alpha, m, kmax);
  pt.value = sol.value;
  pt.gamma_star = sol.gamma_star;
  pt.nu = primal_exponent(c, alpha);
  double nu_dual = dual_exponent(c, alpha);
  pt.achieved_mean = sol.gamma_star == 0.0
                         ? q.mean_q()
                         : mean_under(q, nu_dual - 1.0, sol.gamma_star, m);
  pt.converged = sol.converged;
  return pt;
}

FunctionalCurve functional_curve(const ReferenceMeasure& q, Constraint c,
                                 double alpha,
                                 const std::vector<double>& m_grid, int kmax) {
  FunctionalCurve curve;
  curve.constraint = c;
  curve.alpha = alpha;
  curve.m_grid = m_grid;
  curve.points.resize(m_grid.size());

  int workers = std::min<int>(thread_budget(), static_cast<int>(m_grid.size()));
  if (workers < 1) workers = 1;
  auto run = [&](int w) {
    for (std::size_t i = w; i < m_grid.size(); i += workers) {
      FunctionalPoint& pt = curve.points[i];
      try {
        pt = entropy_functional(q, c, alpha, m_grid[i], kmax);
      } catch (const Error& e) {
        pt.m = m_grid[i];
        pt.value = kNaN;
        pt.gamma_star = kNaN;
        pt.nu = kNaN;
        pt.achieved_mean = kNaN;
        pt.regime_flag = kRegimeInterior;
        pt.converged = false;
        pt.diagnostic = e.what();
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (std::thread& t : pool) t.join();
  }
  return curve;
}

std::vector<double> default_m_grid(const ReferenceMeasure& q, int n) {
  if (n < 2) throw ConfigError("grid needs at least two points");
  SupportDesc sup = q.support();
  double lo, hi;
  if (std::isfinite(sup.lower) && std::isfinite(sup.upper)) {
    double d = 1e-3 * (sup.upper - sup.lower);
    lo = sup.lower + d;
    hi = sup.upper - d;
  } else {
    double mq = q.mean_q();
    lo = 0.1 * mq;
    hi = 3.0 * mq;
  }
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  // Pin the point nearest the reference mean to it exactly so curves carry
  // their zero.
  double mq = q.mean_q();
  if (mq > lo && mq < hi) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (std::fabs(grid[i] - mq) < std::fabs(grid[best] - mq)) best = i;
    }
    grid[best] = mq;
  }
  return grid;
}

std::pair<double, double> duality_check(const ReferenceMeasure& q, double alpha,
                                        double m, int kmax) {
  double fg = entropy_functional(q, Constraint::Generalized, alpha, m, kmax).value;
  double fc = entropy_functional(q, Constraint::Classical, 1.0 / alpha, m, kmax).value;
  return {fg, fc};
}

double bregman_derivative(const ReferenceMeasure& q, double alpha, double m,
                          int kmax) {
  AlphaIndex idx = make_alpha_index(alpha);
  if (!idx.xi_defined) {
    throw ConfigError("envelope derivative undefined at alpha = 1");
  }
  DualSolution sol = solve_constraint(q, Constraint::Generalized, alpha, m, kmax);
  return -sol.gamma_star * idx.xi;
}

double bregman_divergence(const ReferenceMeasure& q, double alpha, double m2,
                          double m1, int kmax) {
  AlphaIndex idx = make_alpha_index(alpha);
  if (!idx.xi_defined) {
    throw ConfigError("object-space divergence needs alpha != 1");
  }
  FunctionalPoint p2 = entropy_functional(q, Constraint::Generalized, alpha, m2, kmax);
  DualSolution s1 = solve_constraint(q, Constraint::Generalized, alpha, m1, kmax);
  // -(alpha-1) * dF/dm * (m2-m1) = (alpha-1) * gamma1 * xi * (m2-m1)
  // and (alpha-1) * xi = 1 exactly.
  double arg = 1.0 + s1.gamma_star * (m2 - m1);
  double base = p2.value - s1.value;
  if (!(arg > 0.0)) {
    throw LogDomainError("object-space divergence log argument is nonpositive",
                         arg, base);
  }
  return base + idx.xi * std::log1p(s1.gamma_star * (m2 - m1));
}

namespace {

Alpha1Value cramer_limit(const ReferenceMeasure& q, double m) {
  CramerResult cr = cramer_transform(q, m);
  return {cr.value, kRegimeLimit, cr.tilt};
}

}  // namespace

Alpha1Value limit_alpha1(const ReferenceMeasure& q, Constraint c, double m,
                         Alpha1Branch branch) {
  SupportDesc sup = q.support();
  if (!(m > sup.lower && m < sup.upper)) {
    throw InfeasibleMean("target mean lies outside the open support hull");
  }
  switch (q.kind) {
    case MeasureKind::Exponential: {
      bool zero_branch =
          (branch == Alpha1Branch::FromBelow && c == Constraint::Classical) ||
          (branch == Alpha1Branch::FromAbove && c == Constraint::Generalized);
      if (zero_branch && m > 1.0 / q.beta) {
        return {0.0, kRegimeZeroEscape, 0.0};
      }
      double bm = q.beta * m;
      return {(bm - 1.0) - std::log(bm), kRegimeLimit, q.beta - 1.0 / m};
    }
    case MeasureKind::Bernoulli: {
      double v = m * std::log(m / (1.0 - q.beta)) +
                 (1.0 - m) * std::log((1.0 - m) / q.beta);
      double tilt = std::log(m * q.beta / ((1.0 - m) * (1.0 - q.beta)));
      return {v, kRegimeLimit, tilt};
    }
    case MeasureKind::Poisson: {
      bool zero_branch =
          (branch == Alpha1Branch::FromBelow && c == Constraint::Classical) ||
          (branch == Alpha1Branch::FromAbove && c == Constraint::Generalized);
      if (zero_branch && m > q.mu) {
        return {0.0, kRegimeZeroEscape, 0.0};
      }
      double v = m * std::log(m / q.mu) + (q.mu - m);
      return {v, kRegimeLimit, std::log(m / q.mu)};
    }
    default:
      return cramer_limit(q, m);
  }
}

double log_mgf(const ReferenceMeasure& q, double t) {
  switch (q.kind) {
    case MeasureKind::Uniform: {
      double s = t * (q.b - q.a);
      double core;
      if (std::fabs(s) < 1e-8) {
        core = std::log1p(0.5 * s + s * s / 6.0);
      } else {
        core = std::log(std::expm1(s) / s);
      }
      // expm1 overflows past ~709; switch to the asymptotic form.
      if (s > 700.0) core = s - std::log(s);
      return t * q.a + core;
    }
    case MeasureKind::Exponential: {
      if (t >= q.beta) return kInf;
      return -std::log1p(-t / q.beta);
    }
    case MeasureKind::Bernoulli: {
      // mass beta at 0, (1 - beta) at 1
      double la = std::log(q.beta);
      double lb = std::log1p(-q.beta) + t;
      double hi = std::max(la, lb);
      return hi + std::log(std::exp(la - hi) + std::exp(lb - hi));
    }
    case MeasureKind::Poisson:
      return q.mu * std::expm1(t);
    case MeasureKind::TabulatedDiscrete: {
      SignedLogSum acc;
      for (std::size_t i = 0; i < q.xs.size(); ++i) {
        acc.add(std::log(q.ws[i]) + t * q.xs[i], 1.0);
      }
      return acc.log_abs();
    }
    case MeasureKind::GriddedContinuous: {
      auto f = [&](double x) -> LogVal {
        double lq = q.log_q(x);
        if (lq == -kInf) return {-kInf, 0.0};
        return {lq + t * x, 1.0};
      };
      QuadResult r = integrate_log(f, q.xs.front(), q.xs.back());
      return r.log_abs;
    }
  }
  throw ConfigError("unknown measure kind");
}

CramerResult cramer_transform(const ReferenceMeasure& q, double m) {
  SupportDesc sup = q.support();
  if (!(m > sup.lower && m < sup.upper)) {
    throw InfeasibleMean("target mean lies outside the open support hull");
  }
  double t_hi = q.kind == MeasureKind::Exponential ? q.beta : kInf;

  auto f = [&](double t) -> double {
    double lm = log_mgf(q, t);
    if (!std::isfinite(lm)) return -kInf;
    return t * m - lm;
  };

  // Probe outward from zero; the objective is concave with a finite peak.
  std::vector<double> ts = {0.0};
  double step = 0.5;
  for (int j = 0; j < 70; ++j) {
    double t = step * (std::pow(2.0, j) - 1.0) + step;
    if (std::isfinite(t_hi)) {
      double capped = t_hi - (t_hi - 0.0) / std::pow(2.0, j + 1);
      ts.push_back(std::min(capped, t));
      if (capped < t) continue;
    } else {
      ts.push_back(t);
    }
    if (t > 1e12) break;
  }
  for (int j = 0; j < 45; ++j) {
    double t = -(step * (std::pow(2.0, j) - 1.0) + step);
    ts.push_back(t);
    if (t < -1e12) break;
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::size_t best = 0;
  std::vector<double> vals(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    vals[i] = f(ts[i]);
    if (vals[i] > vals[best]) best = i;
  }
  double lo = best == 0 ? ts[0] - 1.0 : ts[best - 1];
  double hi = best + 1 == ts.size() ? ts[best] + 1.0 : ts[best + 1];
  MaxResult mr = maximize_bracketed(f, lo, hi);
  if (!std::isfinite(mr.value)) {
    throw DivergentIntegral("log mgf has no finite concave peak here");
  }
  return {mr.value, mr.x};
}

int thread_budget() {
  const char* env = std::getenv("RENYI_MAXENT_THREADS");
  if (env != nullptr) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace renyi
