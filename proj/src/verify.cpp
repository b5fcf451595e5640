#include "renyi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "renyi/bracket.hpp"
#include "renyi/errors.hpp"
#include "renyi/functionals.hpp"
#include "renyi/oracle.hpp"
#include "renyi/partition.hpp"
#include "renyi/solver.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<ReferenceMeasure> builtin_measures() {
  return {
      ReferenceMeasure::uniform(0.0, 1.0),
      ReferenceMeasure::exponential(1.0),
      ReferenceMeasure::bernoulli(0.5),
      ReferenceMeasure::poisson(3.0),
  };
}

ReferenceMeasure random_builtin(std::mt19937_64& rng) {
  auto ms = builtin_measures();
  std::uniform_int_distribution<std::size_t> pick(0, ms.size() - 1);
  return ms[pick(rng)];
}

double random_xbar(const ReferenceMeasure& q, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (q.kind) {
    case MeasureKind::Uniform:
      return q.a + (0.08 + 0.84 * u(rng)) * (q.b - q.a);
    case MeasureKind::Exponential:
      return (0.25 + 2.0 * u(rng)) / q.beta;
    case MeasureKind::Bernoulli:
      return 0.1 + 0.8 * u(rng);
    case MeasureKind::Poisson:
      return 0.4 + 1.8 * q.mu * u(rng);
    default:
      return q.mean_q();
  }
}

double spread_scale(const ReferenceMeasure& q, double xbar) {
  double var = second_moment_about(q, xbar);
  return 1.0 / (1.0 + std::sqrt(var));
}

std::string fail(const std::string& what) { return what; }

CheckResult make_result(const std::string& name, bool pass,
                        const std::string& detail) {
  return {name, pass, detail};
}

// Truncated, renormalized Poisson on {0..12} used by the oracle checks.
ReferenceMeasure truncated_poisson(double mu, int hi) {
  std::vector<double> xs, ws;
  double sum = 0.0;
  for (int k = 0; k <= hi; ++k) {
    double w = std::exp(k * std::log(mu) - std::lgamma(k + 1.0) - mu);
    xs.push_back(static_cast<double>(k));
    ws.push_back(w);
    sum += w;
  }
  for (double& w : ws) w /= sum;
  return ReferenceMeasure::tabulated(xs, ws);
}

// Family member with exponent nu and location xbar whose constraint mean
// (classical or order-alpha generalized) is re-solved to hit target.
MaxEntDistribution perturbed_member(const ReferenceMeasure& q, double nu,
                                    double alpha, Constraint c, double xbar,
                                    double target) {
  auto gap = [&](double g) -> double {
    MaxEntDistribution d = family_member(q, nu, g, xbar);
    return (c == Constraint::Classical ? classical_mean(d)
                                       : generalized_mean(d, alpha)) -
           target;
  };
  double scale = spread_scale(q, xbar);
  double step = 0.25 * scale;
  double lo = 0.0, hi = 0.0, glo = 0.0, ghi = 0.0;
  bool ok = false;
  double g0 = gap(0.0);
  if (g0 == 0.0) return family_member(q, nu, 0.0, xbar);
  for (int j = 0; j < 40 && !ok; ++j) {
    double t = step * std::pow(1.7, j);
    for (double cand : {t, -t}) {
      double gc;
      try {
        gc = gap(cand);
      } catch (const Error&) {
        continue;
      }
      if ((g0 < 0.0 && gc > 0.0) || (g0 > 0.0 && gc < 0.0)) {
        lo = std::min(0.0, cand);
        hi = std::max(0.0, cand);
        glo = lo == 0.0 ? g0 : gc;
        ghi = hi == 0.0 ? g0 : gc;
        ok = true;
        break;
      }
    }
  }
  (void)glo;
  (void)ghi;
  if (!ok) throw NoSolution("no feasible tilt for the perturbed member");
  RootResult r = find_root(gap, lo, hi);
  return family_member(q, nu, r.x, xbar);
}

}  // namespace

std::string format_sig17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CheckResult check_z_recurrence(const CheckOptions& o) {
  const char* name = "z-recurrence";
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int wanted = o.quick ? 30 : 100;
  int done = 0, attempts = 0;
  double worst = 0.0;
  while (done < wanted && attempts < wanted * 60) {
    ++attempts;
    ReferenceMeasure q = random_builtin(rng);
    double xbar = random_xbar(q, rng);
    double nu = -3.0 + 6.0 * unif(rng);
    double gamma = (-0.8 + 1.6 * unif(rng)) * spread_scale(q, xbar);
    if (std::fabs(gamma) < 1e-4) continue;
    try {
      PartitionEval za = partition_z(q, nu, gamma, xbar);
      PartitionEval zb = partition_z(q, nu + 1.0, gamma, xbar);
      if (za.infinite || zb.infinite) continue;
      double e = mean_under(q, nu, gamma, xbar);
      double bracket = 1.0 + gamma * (e - xbar);
      if (!(bracket > 0.0)) continue;
      double lhs = zb.log_value;
      double rhs = za.log_value + std::log(bracket);
      double rel = std::fabs(std::expm1(lhs - rhs));
      worst = std::max(worst, rel);
      if (rel > 1e-8 * o.tol_scale) {
        return make_result(
            name, false,
            fail("relative error " + format_sig17(rel) + " on " +
                 q.describe() + " nu=" + format_sig17(nu) +
                 " gamma=" + format_sig17(gamma)));
      }
      ++done;
    } catch (const Error&) {
      continue;
    }
  }
  if (done < wanted) {
    return make_result(name, false, "could not collect enough instances");
  }
  return make_result(name, true,
                     "100-instance worst rel err " + format_sig17(worst));
}

CheckResult check_dz_finite_difference(const CheckOptions& o) {
  const char* name = "dz-vs-finite-difference";
  std::mt19937_64 rng(o.seed + 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int wanted = o.quick ? 30 : 100;
  int done = 0, attempts = 0;
  double worst = 0.0;
  while (done < wanted && attempts < wanted * 60) {
    ++attempts;
    ReferenceMeasure q = random_builtin(rng);
    double xbar = random_xbar(q, rng);
    double nu = 1.2 + 3.0 * unif(rng);
    double gamma = (-0.6 + 1.2 * unif(rng)) * spread_scale(q, xbar);
    if (std::fabs(gamma) < 1e-3) continue;
    try {
      double dz = partition_dz(q, nu, gamma, xbar, 0.0);
      double h = 1e-6 * (1.0 + std::fabs(gamma));
      PartitionEval zp = partition_z(q, nu, gamma + h, xbar);
      PartitionEval zm = partition_z(q, nu, gamma - h, xbar);
      if (zp.infinite || zm.infinite) continue;
      double fd = (std::exp(zp.log_value) - std::exp(zm.log_value)) / (2.0 * h);
      double denom = std::max({std::fabs(dz), std::fabs(fd), 1e-8});
      double rel = std::fabs(dz - fd) / denom;
      worst = std::max(worst, rel);
      if (rel > 1e-6 * o.tol_scale) {
        return make_result(name, false,
                           fail("rel err " + format_sig17(rel) + " on " +
                                q.describe() + " nu=" + format_sig17(nu) +
                                " gamma=" + format_sig17(gamma)));
      }
      ++done;
    } catch (const ConditionViolated&) {
      continue;
    } catch (const Error&) {
      continue;
    }
  }
  if (done < wanted) {
    return make_result(name, false, "could not collect enough instances");
  }
  return make_result(name, true, "worst rel err " + format_sig17(worst));
}

CheckResult check_d2z_positive(const CheckOptions& o) {
  const char* name = "d2z-positive-on-segments";
  std::mt19937_64 rng(o.seed + 2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  struct Inst {
    int kind;
    Constraint c;
    double alpha;
    double m;
  };
  std::vector<Inst> insts = {
      {0, Constraint::Classical, 2.0, 0.35},
      {0, Constraint::Classical, 0.5, 0.62},
      {1, Constraint::Classical, 2.0, 0.7},
      {1, Constraint::Generalized, 0.5, 1.4},
      {2, Constraint::Classical, 0.5, 0.3},
      {2, Constraint::Generalized, 2.0, 0.62},
      {3, Constraint::Classical, 0.5, 1.15},
      {3, Constraint::Generalized, 2.0, 2.3},
  };
  auto ms = builtin_measures();
  int per_seg = o.quick ? 10 : 50;
  int tested = 0;
  for (const Inst& in : insts) {
    const ReferenceMeasure& q = ms[in.kind];
    double nu = dual_exponent(in.c, in.alpha);
    std::vector<GammaSegment> segs =
        enumerate_segments(q, in.c, in.alpha, in.m, 6);
    for (const GammaSegment& s : segs) {
      double lo = std::isfinite(s.lo) ? s.lo : -8.0;
      double hi = std::isfinite(s.hi) ? s.hi : 8.0;
      if (!(lo < hi)) continue;
      double inset = 1e-3 * (hi - lo);
      for (int t = 0; t < per_seg; ++t) {
        double g = lo + inset + (hi - lo - 2.0 * inset) * unif(rng);
        if (std::fabs(g) < 1e-6) continue;
        try {
          double d2 = partition_d2z(q, nu, g, in.m);
          ++tested;
          if (!(d2 > 0.0) && std::isfinite(d2)) {
            return make_result(
                name, false,
                fail("d2z = " + format_sig17(d2) + " at gamma=" +
                     format_sig17(g) + " on " + q.describe()));
          }
        } catch (const Error&) {
          continue;  // divergent second moment at this point
        }
      }
    }
  }
  if (tested < 50) {
    return make_result(name, false, "too few evaluable points");
  }
  return make_result(name, true,
                     std::to_string(tested) + " sampled points all convex");
}

CheckResult check_closed_vs_quadrature(const CheckOptions& o) {
  const char* name = "closed-form-vs-quadrature";
  std::mt19937_64 rng(o.seed + 3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int wanted = o.quick ? 15 : 50;
  int done = 0, attempts = 0;
  double worst = 0.0;
  while (done < wanted && attempts < wanted * 80) {
    ++attempts;
    ReferenceMeasure q = attempts % 2 == 0
                             ? ReferenceMeasure::uniform(0.0, 1.0)
                             : ReferenceMeasure::exponential(1.0);
    double xbar = random_xbar(q, rng);
    double nu = -2.5 + 6.0 * unif(rng);
    double gamma = (-0.9 + 1.8 * unif(rng)) * spread_scale(q, xbar);
    if (std::fabs(gamma) < 1e-5) continue;
    try {
      PartitionEval zc = partition_z(q, nu, gamma, xbar);
      if (zc.infinite || zc.method != EvalMethod::ClosedForm) continue;
      PartitionEval zq = partition_z_by_quadrature(q, nu, gamma, xbar);
      if (zq.infinite) continue;
      double rel = std::fabs(std::expm1(zc.log_value - zq.log_value));
      worst = std::max(worst, rel);
      if (rel > 1e-8 * o.tol_scale) {
        return make_result(name, false,
                           fail("rel err " + format_sig17(rel) + " on " +
                                q.describe() + " nu=" + format_sig17(nu) +
                                " gamma=" + format_sig17(gamma) +
                                " xbar=" + format_sig17(xbar)));
      }
      ++done;
    } catch (const Error&) {
      continue;
    }
  }
  if (done < wanted) {
    return make_result(name, false, "could not collect enough instances");
  }
  return make_result(name, true, "worst rel err " + format_sig17(worst));
}

namespace {

struct SolveCase {
  int kind;
  Constraint c;
  double alpha;
  std::vector<double> ms;
};

std::vector<SolveCase> stationarity_cases() {
  return {
      {0, Constraint::Classical, 0.5, {0.22, 0.41, 0.68}},
      {0, Constraint::Classical, 2.0, {0.18, 0.55, 0.81}},
      {0, Constraint::Generalized, 0.5, {0.3, 0.52, 0.77}},
      {0, Constraint::Generalized, 2.0, {0.26, 0.47, 0.71}},
      {1, Constraint::Classical, 0.5, {0.35, 0.6, 0.88}},
      {1, Constraint::Classical, 2.0, {0.5, 1.3, 2.4}},
      {1, Constraint::Generalized, 0.5, {0.45, 1.25, 2.1}},
      {1, Constraint::Generalized, 2.0, {0.4, 0.65, 0.9}},
      {2, Constraint::Classical, 0.5, {0.21, 0.44, 0.72}},
      {2, Constraint::Classical, 2.0, {0.3, 0.48, 0.66}},
      {2, Constraint::Generalized, 0.5, {0.24, 0.5, 0.69}},
      {2, Constraint::Generalized, 2.0, {0.33, 0.55, 0.74}},
      {3, Constraint::Classical, 0.5, {1.15, 1.9, 2.6}},
      {3, Constraint::Classical, 2.0, {1.6, 3.7, 4.8}},
      {3, Constraint::Generalized, 0.5, {1.4, 2.8, 4.4}},
      {3, Constraint::Generalized, 2.0, {1.3, 2.1, 2.7}},
  };
}

}  // namespace

CheckResult check_stationarity(const CheckOptions& o) {
  const char* name = "stationarity-mean-match";
  auto ms = builtin_measures();
  double worst = 0.0;
  for (const SolveCase& sc : stationarity_cases()) {
    const ReferenceMeasure& q = ms[sc.kind];
    for (double m : sc.ms) {
      DualSolution sol;
      try {
        sol = solve_constraint(q, sc.c, sc.alpha, m);
      } catch (const Error& e) {
        return make_result(name, false,
                           fail(std::string("solve failed: ") + e.what() +
                                " on " + q.describe() +
                                " m=" + format_sig17(m)));
      }
      double nu = dual_exponent(sc.c, sc.alpha);
      double achieved = sol.gamma_star == 0.0
                            ? q.mean_q()
                            : mean_under(q, nu - 1.0, sol.gamma_star, m);
      double gap = std::fabs(achieved - m) / (1.0 + std::fabs(m));
      worst = std::max(worst, gap);
      if (!sol.converged || gap > 1e-8 * o.tol_scale) {
        return make_result(
            name, false,
            fail("mean gap " + format_sig17(gap) + " converged=" +
                 (sol.converged ? "yes" : "no") + " on " + q.describe() +
                 " alpha=" + format_sig17(sc.alpha) + " m=" + format_sig17(m)));
      }
    }
  }
  return make_result(name, true, "worst relative mean gap " + format_sig17(worst));
}

CheckResult check_nonnegativity(const CheckOptions& o) {
  const char* name = "curve-nonnegative-unique-zero";
  auto ms = builtin_measures();
  for (const ReferenceMeasure& q : ms) {
    for (Constraint c : {Constraint::Classical, Constraint::Generalized}) {
      for (double alpha : {0.5, 2.0}) {
        std::vector<double> grid = default_m_grid(q, o.quick ? 11 : 21);
        FunctionalCurve fc = functional_curve(q, c, alpha, grid);
        double mq = q.mean_q();
        std::size_t nearest = 0;
        double best = kInf;
        double min_finite = kInf;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          double d = std::fabs(grid[i] - mq);
          if (d < best) {
            best = d;
            nearest = i;
          }
          double v = fc.points[i].value;
          if (std::isnan(v)) continue;
          if (v < -1e-12 * o.tol_scale) {
            return make_result(name, false,
                               fail("negative F " + format_sig17(v) + " at m=" +
                                    format_sig17(grid[i]) + " on " +
                                    q.describe()));
          }
          min_finite = std::min(min_finite, v);
        }
        double vz = fc.points[nearest].value;
        if (!(vz <= 1e-8 * o.tol_scale)) {
          return make_result(name, false,
                             fail("F at the reference-mean grid point is " +
                                  format_sig17(vz) + " on " + q.describe()));
        }
        if (min_finite < vz - 1e-12) {
          return make_result(
              name, false,
              fail("minimum not at the reference mean on " + q.describe()));
        }
      }
    }
  }
  return make_result(name, true, "16 curves clean");
}

CheckResult check_convexity(const CheckOptions& o) {
  const char* name = "curve-convexity";
  auto ms = builtin_measures();
  int curves = 0;
  for (const ReferenceMeasure& q : ms) {
    SupportDesc sup = q.support();
    double lo, hi;
    if (std::isfinite(sup.lower) && std::isfinite(sup.upper)) {
      double d = 1e-3 * (sup.upper - sup.lower);
      lo = sup.lower + d;
      hi = sup.upper - d;
    } else {
      lo = 0.1 * q.mean_q();
      hi = 3.0 * q.mean_q();
    }
    int n = o.quick ? 13 : 21;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) {
      grid[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    }
    struct Cfg {
      Constraint c;
      double alpha;
    };
    std::vector<Cfg> cfgs = {
        {Constraint::Classical, 0.3}, {Constraint::Classical, 0.5},
        {Constraint::Classical, 0.8}, {Constraint::Classical, 1.0},
        {Constraint::Generalized, 1.0}, {Constraint::Generalized, 2.0},
        {Constraint::Generalized, 5.0},
    };
    for (const Cfg& cfg : cfgs) {
      FunctionalCurve fc = functional_curve(q, cfg.c, cfg.alpha, grid);
      ++curves;
      for (int i = 1; i + 1 < n; ++i) {
        double a = fc.points[i - 1].value;
        double b = fc.points[i].value;
        double c2 = fc.points[i + 1].value;
        if (std::isnan(a) || std::isnan(b) || std::isnan(c2)) continue;
        double second = a - 2.0 * b + c2;
        if (second < -1e-8 * o.tol_scale) {
          return make_result(
              name, false,
              fail("second difference " + format_sig17(second) + " at m=" +
                   format_sig17(grid[i]) + " alpha=" +
                   format_sig17(cfg.alpha) + " on " + q.describe()));
        }
      }
    }
  }
  return make_result(name, true, std::to_string(curves) + " curves convex");
}

CheckResult check_duality(const CheckOptions& o) {
  const char* name = "constraint-duality";
  auto ms = builtin_measures();
  double worst = 0.0;
  for (const ReferenceMeasure& q : ms) {
    for (double alpha : {0.5, 2.0}) {
      std::vector<double> grid = default_m_grid(q, 9);
      for (double m : grid) {
        double fg = std::numeric_limits<double>::quiet_NaN();
        double fc = std::numeric_limits<double>::quiet_NaN();
        std::string eg, ec;
        try {
          fg = entropy_functional(q, Constraint::Generalized, alpha, m).value;
        } catch (const Error& e) {
          eg = e.what();
        }
        try {
          fc = entropy_functional(q, Constraint::Classical, 1.0 / alpha, m).value;
        } catch (const Error& e) {
          ec = e.what();
        }
        bool gnan = std::isnan(fg);
        bool cnan = std::isnan(fc);
        if (gnan != cnan) {
          return make_result(
              name, false,
              fail("one side failed on " + q.describe() + " alpha=" +
                   format_sig17(alpha) + " m=" + format_sig17(m) + " (" + eg +
                   ec + ")"));
        }
        if (gnan) continue;
        double gap = std::fabs(fg - fc);
        worst = std::max(worst, gap);
        if (gap > 1e-6 * o.tol_scale) {
          return make_result(
              name, false,
              fail("duality gap " + format_sig17(gap) + " on " + q.describe() +
                   " alpha=" + format_sig17(alpha) + " m=" + format_sig17(m)));
        }
      }
    }
  }
  return make_result(name, true, "worst duality gap " + format_sig17(worst));
}

CheckResult check_pythagorean(const CheckOptions& o) {
  const char* name = "pythagorean-equality";
  struct Cfg {
    ReferenceMeasure q;
    double alpha;
    double m;
  };
  std::vector<Cfg> cfgs = {
      {ReferenceMeasure::uniform(0.0, 1.0), 0.5, 0.6},
      {ReferenceMeasure::exponential(1.0), 0.5, 1.3},
      {ReferenceMeasure::bernoulli(0.5), 2.0, 0.4},
      {ReferenceMeasure::poisson(3.0), 2.0, 2.6},
  };
  int count = o.quick ? 6 : 20;
  double worst = 0.0;
  for (const Cfg& cfg : cfgs) {
    MaxEntDistribution pg =
        maxent_distribution(cfg.q, Constraint::Generalized, cfg.alpha, cfg.m);
    double d_pg_q = renyi_divergence_to_ref(pg, cfg.alpha);
    double span = cfg.q.kind == MeasureKind::Poisson ? 0.5 : 0.12;
    for (int t = 0; t < count; ++t) {
      double frac = (t + 1.0) / (count + 1.0);
      double delta = span * (2.0 * frac - 1.0);
      if (std::fabs(delta) < 1e-3) continue;
      MaxEntDistribution p;
      try {
        p = perturbed_member(cfg.q, pg.nu, cfg.alpha, Constraint::Generalized,
                             cfg.m + delta, cfg.m);
      } catch (const Error&) {
        continue;
      }
      double lhs = renyi_divergence_to_ref(p, cfg.alpha);
      double rhs = renyi_divergence(p, pg, cfg.alpha) + d_pg_q;
      double gap = std::fabs(lhs - rhs);
      worst = std::max(worst, gap);
      if (gap > 1e-7 * o.tol_scale) {
        return make_result(
            name, false,
            fail("gap " + format_sig17(gap) + " on " + cfg.q.describe() +
                 " delta=" + format_sig17(delta)));
      }
    }
  }
  return make_result(name, true, "worst gap " + format_sig17(worst));
}

CheckResult check_optimality(const CheckOptions& o) {
  const char* name = "optimum-dominates-perturbations";
  struct Cfg {
    ReferenceMeasure q;
    Constraint c;
    double alpha;
    double m;
  };
  std::vector<Cfg> cfgs = {
      {ReferenceMeasure::uniform(0.0, 1.0), Constraint::Classical, 0.5, 0.35},
      {ReferenceMeasure::exponential(1.0), Constraint::Classical, 2.0, 1.6},
      {ReferenceMeasure::bernoulli(0.5), Constraint::Classical, 2.0, 0.3},
      {ReferenceMeasure::poisson(3.0), Constraint::Generalized, 0.5, 2.2},
  };
  int count = o.quick ? 6 : 20;
  for (const Cfg& cfg : cfgs) {
    DualSolution sol = solve_constraint(cfg.q, cfg.c, cfg.alpha, cfg.m);
    double nu = primal_exponent(cfg.c, cfg.alpha);
    double span = cfg.q.kind == MeasureKind::Poisson ? 0.6 : 0.1;
    for (int t = 0; t < count; ++t) {
      double frac = (t + 1.0) / (count + 1.0);
      double delta = span * (2.0 * frac - 1.0);
      if (std::fabs(delta) < 1e-3) continue;
      MaxEntDistribution p;
      try {
        p = perturbed_member(cfg.q, nu, cfg.alpha, cfg.c, cfg.m + delta,
                             cfg.m);
      } catch (const Error&) {
        continue;
      }
      double d = renyi_divergence_to_ref(p, cfg.alpha);
      if (d < sol.value - 1e-9 * o.tol_scale) {
        return make_result(
            name, false,
            fail("perturbation beats the optimum by " +
                 format_sig17(sol.value - d) + " on " + cfg.q.describe()));
      }
    }
  }
  return make_result(name, true, "no perturbation beat a solve");
}

CheckResult check_escort_involution(const CheckOptions& o) {
  const char* name = "escort-involution";
  ReferenceMeasure q = ReferenceMeasure::bernoulli(0.5);
  double alpha = 0.5;
  MaxEntDistribution p =
      maxent_distribution(q, Constraint::Generalized, alpha, 0.25);
  MaxEntDistribution e1 = escort_of(p, alpha);
  MaxEntDistribution back = escort_of(e1, 1.0 / alpha);
  double worst = 0.0;
  for (double x : {0.0, 1.0}) {
    worst = std::max(worst, std::fabs(density(back, x) - density(p, x)));
  }
  double m1 = density(p, 1.0);
  double e1m = density(e1, 1.0);
  bool vals = std::fabs(m1 - 0.1) < 1e-9 && std::fabs(e1m - 0.25) < 1e-9;
  if (worst > 1e-10 * o.tol_scale || !vals) {
    return make_result(name, false,
                       fail("involution drift " + format_sig17(worst) +
                            " mass(1)=" + format_sig17(m1) + " escort mass=" +
                            format_sig17(e1m)));
  }
  return make_result(name, true, "drift " + format_sig17(worst));
}

CheckResult check_bregman_properties(const CheckOptions& o) {
  const char* name = "object-space-divergence";
  ReferenceMeasure q = ReferenceMeasure::bernoulli(0.5);
  double alpha = 2.0;
  std::vector<double> msv = {0.25, 0.4, 0.6, 0.75};
  double worst = 0.0;
  for (double m1 : msv) {
    double self = bregman_divergence(q, alpha, m1, m1);
    if (std::fabs(self) > 1e-10 * o.tol_scale) {
      return make_result(name, false,
                         fail("nonzero at equal means: " + format_sig17(self)));
    }
    for (double m2 : msv) {
      double b = bregman_divergence(q, alpha, m2, m1);
      if (b < -1e-10 * o.tol_scale) {
        return make_result(name, false, fail("negative value " + format_sig17(b)));
      }
      if (m1 != m2 && b <= 1e-10) {
        return make_result(name, false,
                           fail("zero at distinct means m1=" +
                                format_sig17(m1) + " m2=" + format_sig17(m2)));
      }
      MaxEntDistribution p2 =
          maxent_distribution(q, Constraint::Generalized, alpha, m2);
      MaxEntDistribution p1 =
          maxent_distribution(q, Constraint::Generalized, alpha, m1);
      double direct = renyi_divergence(p2, p1, alpha);
      double gap = std::fabs(b - direct);
      worst = std::max(worst, gap);
      if (gap > 1e-7 * o.tol_scale) {
        return make_result(name, false,
                           fail("dual-path gap " + format_sig17(gap) +
                                " m1=" + format_sig17(m1) +
                                " m2=" + format_sig17(m2)));
      }
    }
  }
  return make_result(name, true, "worst dual-path gap " + format_sig17(worst));
}

CheckResult check_bregman_limit(const CheckOptions& o) {
  const char* name = "object-space-divergence-limit";
  ReferenceMeasure q = ReferenceMeasure::bernoulli(0.5);
  double beta = 0.5;
  auto f = [&](double m) {
    return m * std::log(m / (1.0 - beta)) +
           (1.0 - m) * std::log((1.0 - m) / beta);
  };
  auto fprime = [&](double m) {
    return std::log(m / (1.0 - beta)) - std::log((1.0 - m) / beta);
  };
  double worst = 0.0;
  for (double alpha : {1.001, 0.999}) {
    for (auto [m1, m2] : {std::pair{0.4, 0.6}, std::pair{0.6, 0.4}}) {
      double b = bregman_divergence(q, alpha, m2, m1);
      double expansion = f(m2) - f(m1) - fprime(m1) * (m2 - m1);
      double gap = std::fabs(b - expansion);
      worst = std::max(worst, gap);
      if (gap > 2e-3 * o.tol_scale) {
        return make_result(name, false,
                           fail("limit gap " + format_sig17(gap) + " at alpha=" +
                                format_sig17(alpha)));
      }
    }
  }
  return make_result(name, true, "worst limit gap " + format_sig17(worst));
}

CheckResult check_kmax_monotonicity(const CheckOptions& o) {
  const char* name = "pole-budget-monotone";
  ReferenceMeasure q = ReferenceMeasure::poisson(40.0);
  double prev = kInf;
  std::string seq;
  for (int kmax : {2, 5, 12, 25}) {
    DualSolution sol =
        solve_constraint(q, Constraint::Classical, 0.5, 20.5, kmax);
    seq += format_sig17(sol.value) + " ";
    if (sol.value > prev + 1e-12 * o.tol_scale) {
      return make_result(name, false,
                         fail("value increased with budget: " + seq));
    }
    prev = sol.value;
  }
  ReferenceMeasure q2 = ReferenceMeasure::poisson(3.0);
  double prev2 = kInf;
  for (int kmax : {1, 2, 8, 32}) {
    DualSolution sol =
        solve_constraint(q2, Constraint::Classical, 0.5, 1.15, kmax);
    if (sol.value > prev2 + 1e-12 * o.tol_scale) {
      return make_result(name, false, fail("small-case value increased"));
    }
    prev2 = sol.value;
  }
  return make_result(name, true, "values " + seq);
}

CheckResult check_oracle_agreement(const CheckOptions& o) {
  const char* name = "oracle-agreement";
  ReferenceMeasure q = truncated_poisson(3.0, 12);
  SimplexProblem prob;
  prob.support = q.atom_xs();
  prob.q_masses = q.atom_masses();
  int iters = o.quick ? 400 : 1500;
  double worst = 0.0;
  for (double alpha : {0.5, 2.0}) {
    for (Constraint c : {Constraint::Classical, Constraint::Generalized}) {
      for (double m : {1.5, 2.5, 4.0}) {
        DualSolution sol = solve_constraint(q, c, alpha, m);
        prob.alpha = alpha;
        prob.constraint = c;
        prob.m = m;
        OracleResult orc = brute_force_solve(prob, iters, o.seed);
        double gap = orc.divergence - sol.value;
        worst = std::max(worst, std::fabs(gap));
        if (gap < -1e-4 * o.tol_scale || std::fabs(gap) > 1e-4 * o.tol_scale) {
          return make_result(
              name, false,
              fail("oracle gap " + format_sig17(gap) + " alpha=" +
                   format_sig17(alpha) + " m=" + format_sig17(m) +
                   (c == Constraint::Classical ? " C" : " G")));
        }
      }
    }
  }
  return make_result(name, true, "worst |gap| " + format_sig17(worst));
}

CheckResult check_oracle_form(const CheckOptions& o) {
  const char* name = "oracle-density-ratio-form";
  ReferenceMeasure q = truncated_poisson(3.0, 12);
  SimplexProblem prob;
  prob.support = q.atom_xs();
  prob.q_masses = q.atom_masses();
  prob.alpha = 2.0;
  prob.constraint = Constraint::Classical;
  prob.m = 2.5;
  DualSolution sol = solve_constraint(q, prob.constraint, prob.alpha, prob.m);
  double nu = primal_exponent(prob.constraint, prob.alpha);
  OracleResult orc = brute_force_solve(prob, o.quick ? 600 : 2000, o.seed);
  // Regress log(p/q) on log(1 + gamma (x - m)).
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < prob.support.size(); ++i) {
    double u = 1.0 + sol.gamma_star * (prob.support[i] - prob.m);
    if (orc.p[i] < 1e-12 || u <= 0.0) continue;
    xs.push_back(nu * std::log(u));
    ys.push_back(std::log(orc.p[i] / prob.q_masses[i]));
  }
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  double cov = sxy - sx * sy / n;
  double vx = sxx - sx * sx / n;
  double vy = syy - sy * sy / n;
  double r2 = vx > 0.0 && vy > 0.0 ? (cov * cov) / (vx * vy) : 0.0;
  if (r2 < 0.999 * (o.tol_scale <= 1.0 ? 1.0 : o.tol_scale)) {
    return make_result(name, false, fail("R^2 = " + format_sig17(r2)));
  }
  return make_result(name, true, "R^2 = " + format_sig17(r2));
}

CheckResult check_csv_roundtrip(const CheckOptions& o) {
  const char* name = "csv-value-roundtrip";
  std::mt19937_64 rng(o.seed + 7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_real_distribution<double> mag(-300.0, 300.0);
  int n = o.quick ? 20 : 60;
  for (int i = 0; i < n; ++i) {
    double v = unif(rng) * std::pow(10.0, mag(rng));
    if (i % 7 == 0) v = unif(rng);
    std::string s = format_sig17(v);
    double back = std::strtod(s.c_str(), nullptr);
    if (std::memcmp(&v, &back, sizeof v) != 0) {
      return make_result(name, false, fail("value " + s + " did not round-trip"));
    }
  }
  DualSolution sol = solve_constraint(ReferenceMeasure::poisson(3.0),
                                      Constraint::Classical, 0.5, 1.15);
  for (double v : {sol.gamma_star, sol.value}) {
    std::string s = format_sig17(v);
    double back = std::strtod(s.c_str(), nullptr);
    if (std::memcmp(&v, &back, sizeof v) != 0) {
      return make_result(name, false, fail("solver output did not round-trip"));
    }
  }
  return make_result(name, true, std::to_string(n + 2) + " values exact");
}

CheckResult check_determinism(const CheckOptions& o) {
  const char* name = "seeded-determinism";
  ReferenceMeasure q = truncated_poisson(3.0, 8);
  SimplexProblem prob;
  prob.support = q.atom_xs();
  prob.q_masses = q.atom_masses();
  prob.alpha = 2.0;
  prob.constraint = Constraint::Generalized;
  prob.m = 2.2;
  OracleResult a = brute_force_solve(prob, 200, o.seed);
  OracleResult b = brute_force_solve(prob, 200, o.seed);
  std::ostringstream ra, rb;
  ra << format_sig17(a.divergence) << ":" << a.best_start;
  rb << format_sig17(b.divergence) << ":" << b.best_start;
  for (std::size_t i = 0; i < a.p.size(); ++i) ra << "," << format_sig17(a.p[i]);
  for (std::size_t i = 0; i < b.p.size(); ++i) rb << "," << format_sig17(b.p[i]);
  if (ra.str() != rb.str()) {
    return make_result(name, false, fail("reports differ across reruns"));
  }
  return make_result(name, true, "byte-identical reruns");
}

std::vector<CheckResult> run_all_checks(const CheckOptions& o) {
  std::vector<CheckResult> out;
  auto run = [&](CheckResult (*fn)(const CheckOptions&)) {
    try {
      out.push_back(fn(o));
    } catch (const std::exception& e) {
      out.push_back({"(exception)", false, e.what()});
    }
  };
  run(check_z_recurrence);
  run(check_dz_finite_difference);
  run(check_d2z_positive);
  run(check_closed_vs_quadrature);
  run(check_stationarity);
  run(check_nonnegativity);
  run(check_convexity);
  run(check_duality);
  run(check_pythagorean);
  run(check_optimality);
  run(check_escort_involution);
  run(check_bregman_properties);
  run(check_bregman_limit);
  run(check_kmax_monotonicity);
  run(check_oracle_agreement);
  run(check_oracle_form);
  run(check_csv_roundtrip);
  run(check_determinism);
  return out;
}

}  // namespace renyi
