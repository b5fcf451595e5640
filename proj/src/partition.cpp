#include "renyi/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "renyi/accum.hpp"
#include "renyi/errors.hpp"
#include "renyi/quadrature.hpp"
#include "renyi/special.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double base_u(double gamma, double x, double xbar) {
  // fma keeps full relative precision when the product lands near -1,
  // which is exactly where the pole structure lives.
  return std::fma(gamma, x - xbar, 1.0);
}

// An atom sitting numerically on the constraint boundary.
bool singular_u(double u, double gamma, double x, double xbar) {
  return std::fabs(u) < 1e-13 * (1.0 + std::fabs(gamma * (x - xbar)));
}

double log_abs_expm1(double t) {
  if (t > 33.0) return t + std::log1p(-std::exp(-t));
  if (t > 0.0) return std::log(std::expm1(t));
  return std::log(-std::expm1(t));
}

double saturating_exp(double l) { return std::exp(std::min(l, 709.0)); }

// Absolute slack for domain-edge comparisons; infinite ends contribute no
// scale (a huge fuzz would silently re-admit excluded atoms).
double domain_fuzz(double lo, double hi) {
  double s = 1.0;
  if (std::isfinite(lo)) s += std::fabs(lo);
  if (std::isfinite(hi)) s += std::fabs(hi);
  return 1e-12 * s;
}

PartitionEval make_eval(double log_value, EvalMethod method, double est) {
  PartitionEval e;
  e.log_value = log_value;
  e.infinite = std::isinf(log_value) && log_value > 0.0;
  e.value = e.infinite ? kInf : saturating_exp(log_value);
  e.est_abs_error = est;
  e.method = method;
  return e;
}

PartitionEval infinite_eval(EvalMethod method) {
  return make_eval(kInf, method, 0.0);
}

// Weight factors for the moment integrals: 1, x, x - c, (x - c)^2.
struct Weight {
  int code = 0;
  double c = 0.0;
  double operator()(double x) const {
    switch (code) {
      case 0: return 1.0;
      case 1: return x;
      case 2: return x - c;
      default: {
        double d = x - c;
        return d * d;
      }
    }
  }
};

struct WeightedSum {
  SignedLogSum acc;
  bool infinite = false;
  double est_abs = 0.0;
};

// ---------------------------------------------------------------------------
// Discrete sums.

void add_atom(WeightedSum& out, double mass, double x, double expo,
              double gamma, double xbar, const Weight& w) {
  double u = base_u(gamma, x, xbar);
  if (singular_u(u, gamma, x, xbar)) {
    if (expo < 0.0) {
      out.infinite = true;
      return;
    }
    if (expo > 0.0) return;
    double wx = w(x);
    if (wx != 0.0) out.acc.add_value(mass * wx);
    return;
  }
  if (u < 0.0) {
    if (expo >= 0.0) return;  // rounding pushed an excluded atom inside
    throw NumericalFailure("negative base at an atom inside the domain");
  }
  double wx = w(x);
  if (wx == 0.0) return;
  double lt = std::log(mass) + expo * std::log(u) + std::log(std::fabs(wx));
  out.acc.add(lt, wx > 0.0 ? 1.0 : -1.0);
}

WeightedSum finite_discrete_weighted(const ReferenceMeasure& q, double expo,
                                     double gamma, double xbar, const Weight& w,
                                     const DomainSpec& dom) {
  WeightedSum out;
  const auto& xs = q.atom_xs();
  auto ms = q.atom_masses();
  double fuzz = domain_fuzz(dom.lo, dom.hi);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < dom.lo - fuzz || xs[i] > dom.hi + fuzz) continue;
    add_atom(out, ms[i], xs[i], expo, gamma, xbar, w);
    if (out.infinite) return out;
  }
  out.est_abs = 8e-16 * saturating_exp(out.acc.log_abs());
  return out;
}

WeightedSum poisson_weighted(const ReferenceMeasure& q, double expo,
                             double gamma, double xbar, const Weight& w,
                             const DomainSpec& dom) {
  WeightedSum out;
  const double mu = q.mu;
  const double soft_stop = mu + 10.0 * std::sqrt(mu) + 10.0;
  const long long k0 = static_cast<long long>(std::max(0.0, dom.lo));
  double lpois = -mu + k0 * std::log(mu) - std::lgamma(k0 + 1.0);
  double prev_bound = kInf;
  double tail_bound = -kInf;
  bool truncated = true;
  long long k = k0;
  for (long long it = 0;; ++it, ++k) {
    if (static_cast<double>(k) > dom.hi) {
      truncated = false;
      break;
    }
    if (it >= 1000000) throw NumericalFailure("poisson series: term cap reached");
    double x = static_cast<double>(k);
    double u = base_u(gamma, x, xbar);
    // Conservative magnitude bound covering every weight code, so a zero
    // weight at one atom cannot trigger a premature stop.
    double bound = -kInf;
    if (singular_u(u, gamma, x, xbar)) {
      if (expo < 0.0) {
        out.infinite = true;
        return out;
      }
      if (expo == 0.0) {
        double wx = w(x);
        if (wx != 0.0)
          out.acc.add(lpois + std::log(std::fabs(wx)), wx > 0 ? 1.0 : -1.0);
      }
    } else if (u < 0.0) {
      if (expo < 0.0)
        throw NumericalFailure("negative base at an atom inside the domain");
    } else {
      double wx = w(x);
      double lmag = lpois + expo * std::log(u);
      bound = lmag + std::log1p(std::fabs(wx) + std::fabs(x));
      if (wx != 0.0)
        out.acc.add(lmag + std::log(std::fabs(wx)), wx > 0 ? 1.0 : -1.0);
    }
    tail_bound = bound;
    if (x > soft_stop && bound < prev_bound && !out.acc.zero() &&
        bound - out.acc.log_abs() < -40.0)
      break;
    prev_bound = bound;
    lpois += std::log(mu) - std::log(static_cast<double>(k + 1));
  }
  out.est_abs = 8e-16 * saturating_exp(out.acc.log_abs());
  if (truncated) out.est_abs += 10.0 * saturating_exp(tail_bound);
  return out;
}

// ---------------------------------------------------------------------------
// Continuous integrals.

double exponential_truncation(const ReferenceMeasure& q, double expo,
                              double gamma, double xbar, double lo) {
  double t = lo + 800.0 / q.beta;
  for (int i = 0; i < 8; ++i) {
    double growth = std::fabs(expo) * std::log1p(std::fabs(gamma) * (std::fabs(t - xbar) + 1.0)) +
                    2.0 * std::log1p(std::fabs(t));
    t = lo + (800.0 + growth) / q.beta;
  }
  return t;
}

// One adaptive integral of q(x) w(x) u^expo over [a, b] with u > 0 inside.
void direct_piece(WeightedSum& out, const ReferenceMeasure& q, double expo,
                  double gamma, double xbar, const Weight& w, double a, double b) {
  if (!(a < b)) return;
  auto f = [&](double x) -> LogVal {
    double u = base_u(gamma, x, xbar);
    if (u <= 0.0) return {-kInf, 0.0};
    double wx = w(x);
    if (wx == 0.0) return {-kInf, 0.0};
    double lq = q.log_q(x);
    if (lq == -kInf) return {-kInf, 0.0};
    double l = lq + expo * std::log(u) + std::log(std::fabs(wx));
    return {l, wx > 0.0 ? 1.0 : -1.0};
  };
  QuadResult r = integrate_log(f, a, b);
  out.acc.add(r.log_abs, r.sign);
  out.est_abs += r.est_abs_error;
}

// Piece whose endpoint `edge` carries the u = 0 singularity, with
// expo in (-1, 0). Substituting u = w^p with p = 1/(expo + 1) flattens
// u^expo du into p dw exactly.
void substituted_piece(WeightedSum& out, const ReferenceMeasure& q, double expo,
                       double gamma, const Weight& w, double edge,
                       double far) {
  double absg = std::fabs(gamma);
  double u_far = absg * std::fabs(far - edge);
  if (u_far <= 0.0) return;
  double p = 1.0 / (expo + 1.0);
  double dir = (far > edge) ? 1.0 : -1.0;
  double w_hi = std::exp((expo + 1.0) * std::log(u_far));
  auto f = [&](double wv) -> LogVal {
    double x = edge + dir * std::exp(p * std::log(wv)) / absg;
    double wx = w(x);
    if (wx == 0.0) return {-kInf, 0.0};
    double lq = q.log_q(x);
    if (lq == -kInf) return {-kInf, 0.0};
    return {lq + std::log(std::fabs(wx)), wx > 0.0 ? 1.0 : -1.0};
  };
  QuadResult r = integrate_log(f, 0.0, w_hi);
  out.acc.add(r.log_abs + std::log(p / absg), r.sign);
  out.est_abs += r.est_abs_error * p / absg;
}

WeightedSum continuous_weighted(const ReferenceMeasure& q, double expo,
                                double gamma, double xbar, const Weight& w) {
  DomainSpec dom = effective_domain(q, gamma, xbar);
  double lo = dom.lo;
  double hi = dom.hi;
  bool binding_lo = gamma > 0.0 && singular_u(base_u(gamma, lo, xbar), gamma, lo, xbar);
  bool binding_hi = gamma < 0.0 && singular_u(base_u(gamma, hi, xbar), gamma, hi, xbar);
  if (std::isinf(hi)) hi = exponential_truncation(q, expo, gamma, xbar, lo);

  WeightedSum out;
  if ((binding_lo || binding_hi) && expo <= -1.0) {
    // The density is positive at the singular edge for these kinds unless the
    // grid happens to vanish there; treat a positive density as divergent.
    double edge = binding_lo ? lo : hi;
    double probe = binding_lo ? std::min(hi, edge + 1e-9 * (1.0 + std::fabs(edge)))
                              : std::max(lo, edge - 1e-9 * (1.0 + std::fabs(edge)));
    if (q.log_q(probe) > -kInf || expo <= -2.0) {
      out.infinite = true;
      return out;
    }
  }

  // Cut points: domain ends, grid knots, at most one singular edge.
  std::vector<double> cuts{lo, hi};
  if (q.kind == MeasureKind::GriddedContinuous)
    for (double knot : q.xs)
      if (knot > lo && knot < hi) cuts.push_back(knot);
  std::sort(cuts.begin(), cuts.end());

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    if (binding_lo && i == 0 && expo < 0.0 && expo > -1.0) {
      substituted_piece(out, q, expo, gamma, w, a, b);
    } else if (binding_hi && i + 2 == cuts.size() && expo < 0.0 && expo > -1.0) {
      substituted_piece(out, q, expo, gamma, w, b, a);
    } else {
      direct_piece(out, q, expo, gamma, xbar, w, a, b);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms.

PartitionEval uniform_closed_z(const ReferenceMeasure& q, double nu,
                               double gamma, double xbar) {
  DomainSpec dom = effective_domain(q, gamma, xbar);
  double lo = dom.lo, hi = dom.hi;
  double width = q.b - q.a;
  double u_lo = base_u(gamma, lo, xbar);
  double u_hi = base_u(gamma, hi, xbar);
  if (singular_u(u_lo, gamma, lo, xbar)) u_lo = 0.0;
  if (singular_u(u_hi, gamma, hi, xbar)) u_hi = 0.0;
  // An edge produced by the sign-boundary clip is the exact zero of u; the
  // rounded base there can land a few ulp on the wrong side and poison the
  // log1p forms below.
  if (lo > q.a) u_lo = 0.0;
  if (hi < q.b) u_hi = 0.0;
  double log_z;
  if (u_lo == 0.0 || u_hi == 0.0) {
    if (nu <= -1.0) return infinite_eval(EvalMethod::ClosedForm);
    double other = (u_lo == 0.0) ? hi : lo;
    double l_other = std::log1p(gamma * (other - xbar));
    log_z = (nu + 1.0) * l_other -
            std::log((nu + 1.0) * std::fabs(gamma) * width);
  } else if (nu == -1.0) {
    double delta = std::log1p(gamma * (hi - lo) / u_lo);
    log_z = std::log(std::fabs(delta) / (std::fabs(gamma) * width));
  } else {
    double l_lo = std::log1p(gamma * (lo - xbar));
    double delta = std::log1p(gamma * (hi - lo) / u_lo);
    log_z = (nu + 1.0) * l_lo + log_abs_expm1((nu + 1.0) * delta) -
            std::log(std::fabs(gamma * (nu + 1.0)) * width);
  }
  return make_eval(log_z, EvalMethod::ClosedForm, 4e-16 * saturating_exp(log_z));
}

PartitionEval exponential_closed_z(const ReferenceMeasure& q, double nu,
                                   double gamma, double xbar) {
  effective_domain(q, gamma, xbar);  // validates nonemptiness
  const double beta = q.beta;
  double log_z;
  if (gamma > 0.0) {
    double head = 1.0 - gamma * xbar;  // gamma * (1/gamma - xbar)
    if (head <= 0.0 ||
        singular_u(head, gamma, 0.0, xbar)) {  // boundary at or inside support
      if (head > 0.0) head = 0.0;
      if (nu < 0.0) return infinite_eval(EvalMethod::ClosedForm);
      double x0 = beta * head / gamma;
      log_z = x0 + nu * std::log(gamma / beta) + std::lgamma(nu + 1.0);
    } else {
      double x0 = beta * head / gamma;
      double s = nu + 1.0;
      if (gamma_upper_cf_ok(s, x0)) {
        // Assembled so the e^{x0} factor cancels symbolically.
        log_z = std::log(beta / gamma) + s * std::log1p(-gamma * xbar) +
                log_gamma_upper_cf_factor(s, x0);
      } else {
        double lg = log_gamma_upper(s, x0);
        if (std::isinf(lg) && lg > 0.0) return infinite_eval(EvalMethod::ClosedForm);
        log_z = x0 + nu * std::log(gamma / beta) + lg;
      }
    }
  } else {  // gamma < 0
    if (nu < 0.0) return infinite_eval(EvalMethod::ClosedForm);
    double edge = xbar - 1.0 / gamma;
    double y = beta * edge;
    double s = nu + 1.0;
    if (grow_asym_ok(s, y)) {
      // y^{s-1} e^y prefactor cancels against e^{-y} c^{-nu-1} pieces.
      log_z = nu * std::log1p(-gamma * xbar) + log_grow_asym_factor(s, y);
    } else {
      double c = beta / -gamma;
      log_z = -nu * std::log(c) - y + log_grow_integral(s, y);
    }
  }
  return make_eval(log_z, EvalMethod::ClosedForm, 6e-15 * saturating_exp(log_z));
}

// Differentiating Z in gamma moves the constraint boundary. With the
// boundary inside the support, a continuous measure needs nu > order - 1 so
// the boundary term vanishes and the integrand stays integrable; a discrete
// one only breaks when an atom sits exactly on the boundary with nu <= order.
void check_derivative_conditions(const ReferenceMeasure& q, double nu,
                                 double gamma, double xbar, int order) {
  if (gamma == 0.0) return;
  double xstar = xbar - 1.0 / gamma;
  SupportDesc sup = q.support();
  double fuzz = 1e-12 * (1.0 + std::fabs(xstar));
  if (xstar < sup.lower - fuzz || xstar > sup.upper + fuzz) return;
  if (!q.is_discrete()) {
    if (nu <= static_cast<double>(order) - 1.0)
      throw ConditionViolated("derivative with a binding boundary needs a larger exponent");
    return;
  }
  bool on_atom = false;
  if (q.kind == MeasureKind::Poisson) {
    double k = std::round(xstar);
    on_atom = k >= 0.0 && singular_u(base_u(gamma, k, xbar), gamma, k, xbar);
  } else {
    for (double x : q.atom_xs())
      on_atom = on_atom || singular_u(base_u(gamma, x, xbar), gamma, x, xbar);
  }
  if (on_atom && nu <= static_cast<double>(order))
    throw ConditionViolated("constraint boundary sits on an atom");
}

WeightedSum dispatch_weighted(const ReferenceMeasure& q, double expo,
                              double gamma, double xbar, const Weight& w) {
  switch (q.kind) {
    case MeasureKind::Bernoulli:
    case MeasureKind::TabulatedDiscrete:
      return finite_discrete_weighted(q, expo, gamma, xbar, w,
                                      effective_domain(q, gamma, xbar));
    case MeasureKind::Poisson:
      return poisson_weighted(q, expo, gamma, xbar, w,
                              effective_domain(q, gamma, xbar));
    default:
      return continuous_weighted(q, expo, gamma, xbar, w);
  }
}

}  // namespace

DomainSpec effective_domain(const ReferenceMeasure& q, double gamma, double xbar) {
  SupportDesc sup = q.support();
  double lo = sup.lower, hi = sup.upper;
  if (gamma > 0.0) lo = std::max(lo, xbar - 1.0 / gamma);
  if (gamma < 0.0) hi = std::min(hi, xbar - 1.0 / gamma);
  double fuzz = domain_fuzz(lo, hi);
  if (q.kind == MeasureKind::TabulatedDiscrete) {
    bool any = false;
    for (double x : q.xs) any = any || (x >= lo - fuzz && x <= hi + fuzz);
    if (!any) throw EmptyDomain("no atoms satisfy the sign constraint");
    if (sup.integer_lattice)
      return {true, std::ceil(lo - fuzz), std::floor(hi + fuzz)};
    return {false, lo, hi};
  }
  if (sup.integer_lattice) {
    double li = std::ceil(lo - fuzz);
    double ho = std::floor(hi + fuzz);
    if (li > ho) throw EmptyDomain("no lattice points satisfy the sign constraint");
    return {true, li, ho};
  }
  if (!(lo < hi)) throw EmptyDomain("sign constraint removes the whole support");
  return {false, lo, hi};
}

PartitionEval partition_z(const ReferenceMeasure& q, double nu, double gamma,
                          double xbar) {
  if (gamma == 0.0) return make_eval(0.0, EvalMethod::ClosedForm, 0.0);
  switch (q.kind) {
    case MeasureKind::Uniform:
      return uniform_closed_z(q, nu, gamma, xbar);
    case MeasureKind::Exponential:
      return exponential_closed_z(q, nu, gamma, xbar);
    case MeasureKind::Bernoulli:
    case MeasureKind::TabulatedDiscrete: {
      WeightedSum s = finite_discrete_weighted(q, nu, gamma, xbar, Weight{0, 0.0},
                                               effective_domain(q, gamma, xbar));
      if (s.infinite) return infinite_eval(EvalMethod::ClosedForm);
      return make_eval(s.acc.log_abs(), EvalMethod::ClosedForm, s.est_abs);
    }
    case MeasureKind::Poisson: {
      WeightedSum s = poisson_weighted(q, nu, gamma, xbar, Weight{0, 0.0},
                                       effective_domain(q, gamma, xbar));
      if (s.infinite) return infinite_eval(EvalMethod::Series);
      return make_eval(s.acc.log_abs(), EvalMethod::Series, s.est_abs);
    }
    case MeasureKind::GriddedContinuous: {
      WeightedSum s = continuous_weighted(q, nu, gamma, xbar, Weight{0, 0.0});
      if (s.infinite) return infinite_eval(EvalMethod::Quadrature);
      return make_eval(s.acc.log_abs(), EvalMethod::Quadrature, s.est_abs);
    }
  }
  throw NumericalFailure("partition_z: unknown measure kind");
}

PartitionEval partition_z_by_quadrature(const ReferenceMeasure& q, double nu,
                                        double gamma, double xbar) {
  if (q.is_discrete())
    throw NumericalFailure("quadrature cross-check requires a continuous measure");
  WeightedSum s = continuous_weighted(q, nu, gamma, xbar, Weight{0, 0.0});
  if (s.infinite) return infinite_eval(EvalMethod::Quadrature);
  return make_eval(s.acc.log_abs(), EvalMethod::Quadrature, s.est_abs);
}

double partition_dz(const ReferenceMeasure& q, double nu, double gamma,
                    double xbar, double dxbar_dgamma) {
  if (gamma == 0.0) return nu * (q.mean_q() - xbar);
  check_derivative_conditions(q, nu, gamma, xbar, 1);
  PartitionEval z_lower = partition_z(q, nu - 1.0, gamma, xbar);
  if (z_lower.infinite)
    throw ConditionViolated("derivative of a divergent integral");
  WeightedSum a = dispatch_weighted(q, nu - 1.0, gamma, xbar, Weight{2, xbar});
  if (a.infinite) throw ConditionViolated("derivative of a divergent integral");
  double a_val = a.acc.sign() * saturating_exp(a.acc.log_abs());
  return nu * (a_val - gamma * dxbar_dgamma * z_lower.value);
}

double partition_d2z(const ReferenceMeasure& q, double nu, double gamma,
                     double xbar) {
  if (gamma == 0.0) return nu * (nu - 1.0) * second_moment_about(q, xbar);
  check_derivative_conditions(q, nu, gamma, xbar, 2);
  WeightedSum s = dispatch_weighted(q, nu - 2.0, gamma, xbar, Weight{3, xbar});
  if (s.infinite) throw ConditionViolated("second derivative of a divergent integral");
  return nu * (nu - 1.0) * s.acc.sign() * saturating_exp(s.acc.log_abs());
}

double mean_under(const ReferenceMeasure& q, double nu, double gamma,
                  double xbar) {
  if (gamma == 0.0) return q.mean_q();
  PartitionEval z = partition_z(q, nu, gamma, xbar);
  if (z.infinite) throw NumericalFailure("mean under a divergent tilt");
  WeightedSum num = dispatch_weighted(q, nu, gamma, xbar, Weight{1, 0.0});
  if (num.infinite) throw NumericalFailure("mean under a divergent tilt");
  if (num.acc.zero()) return 0.0;
  return num.acc.sign() * std::exp(num.acc.log_abs() - z.log_value);
}

double second_moment_about(const ReferenceMeasure& q, double c) {
  switch (q.kind) {
    case MeasureKind::Uniform: {
      double t1 = q.b - c, t0 = q.a - c;
      return (t1 * t1 * t1 - t0 * t0 * t0) / (3.0 * (q.b - q.a));
    }
    case MeasureKind::Exponential: {
      double d = 1.0 / q.beta - c;
      return 1.0 / (q.beta * q.beta) + d * d;
    }
    case MeasureKind::Bernoulli:
      return q.beta * c * c + (1.0 - q.beta) * (1.0 - c) * (1.0 - c);
    case MeasureKind::Poisson:
      return q.mu + (q.mu - c) * (q.mu - c);
    case MeasureKind::TabulatedDiscrete: {
      KahanSum s;
      for (std::size_t i = 0; i < q.xs.size(); ++i)
        s.add(q.ws[i] * (q.xs[i] - c) * (q.xs[i] - c));
      return s.value();
    }
    case MeasureKind::GriddedContinuous: {
      // Simpson is exact for (x - c)^2 times a linear density.
      KahanSum s;
      for (std::size_t i = 0; i + 1 < q.xs.size(); ++i) {
        double x0 = q.xs[i], x1 = q.xs[i + 1];
        double xm = 0.5 * (x0 + x1);
        double dm = 0.5 * (q.ws[i] + q.ws[i + 1]);
        double f0 = (x0 - c) * (x0 - c) * q.ws[i];
        double fm = (xm - c) * (xm - c) * dm;
        double f1 = (x1 - c) * (x1 - c) * q.ws[i + 1];
        s.add((x1 - x0) * (f0 + 4.0 * fm + f1) / 6.0);
      }
      return s.value();
    }
  }
  throw NumericalFailure("second_moment_about: unknown measure kind");
}

}  // namespace renyi
