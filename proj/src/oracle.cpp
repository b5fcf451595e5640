#include "renyi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "renyi/accum.hpp"
#include "renyi/bracket.hpp"
#include "renyi/errors.hpp"
#include "renyi/functionals.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const SimplexProblem& prob) {
  std::size_t n = prob.support.size();
  if (n < 2 || n > 32) throw Infeasible("oracle supports 2..32 points");
  if (prob.q_masses.size() != n) throw Infeasible("mass/support size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(prob.q_masses[i] > 0.0)) throw Infeasible("masses must be positive");
    if (i > 0 && !(prob.support[i] > prob.support[i - 1])) {
      throw Infeasible("support must be strictly increasing");
    }
    sum += prob.q_masses[i];
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw Infeasible("masses must sum to one");
  if (!(prob.m > prob.support.front() && prob.m < prob.support.back())) {
    throw Infeasible("mean outside the open hull");
  }
  if (!(prob.alpha > 0.0)) throw Infeasible("alpha must be positive");
}

// Masses proportional to exp(logw + t x), normalized.
std::vector<double> tilted(const SimplexProblem& prob,
                           const std::vector<double>& logw, double t) {
  std::size_t n = logw.size();
  double hi = -kInf;
  std::vector<double> lp(n);
  for (std::size_t i = 0; i < n; ++i) {
    lp[i] = logw[i] + t * prob.support[i];
    hi = std::max(hi, lp[i]);
  }
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lp[i] = std::exp(lp[i] - hi);
    z += lp[i];
  }
  for (std::size_t i = 0; i < n; ++i) lp[i] /= z;
  return lp;
}

double constraint_mean(const SimplexProblem& prob,
                       const std::vector<double>& p) {
  std::size_t n = p.size();
  if (prob.constraint == Constraint::Classical) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i] * prob.support[i];
    return s;
  }
  // Escort mean relative to q, in log space.
  SignedLogSum num, den;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] <= 0.0) continue;
    double lt = prob.alpha * std::log(p[i]) +
                (1.0 - prob.alpha) * std::log(prob.q_masses[i]);
    den.add(lt, 1.0);
    double x = prob.support[i];
    if (x != 0.0) num.add(lt + std::log(std::fabs(x)), x > 0.0 ? 1.0 : -1.0);
  }
  if (den.zero()) throw Infeasible("escort normalizer vanished");
  if (num.zero()) return 0.0;
  return num.sign() * std::exp(num.log_abs() - den.log_abs());
}

// Re-solve the exponential tilt so the constraint mean equals m exactly;
// the tilted mean is strictly increasing in t.
std::vector<double> repair(const SimplexProblem& prob,
                           const std::vector<double>& logw) {
  auto gap = [&](double t) {
    return constraint_mean(prob, tilted(prob, logw, t)) - prob.m;
  };
  double span = prob.support.back() - prob.support.front();
  double step = 1.0 / span;
  double lo = 0.0, hi = 0.0;
  double g0 = gap(0.0);
  if (g0 == 0.0) return tilted(prob, logw, 0.0);
  if (g0 > 0.0) {
    hi = 0.0;
    lo = -step;
    for (int j = 0; j < 90 && gap(lo) > 0.0; ++j) {
      hi = lo;
      lo *= 2.0;
    }
    if (gap(lo) > 0.0) throw Infeasible("tilt repair failed to bracket");
  } else {
    lo = 0.0;
    hi = step;
    for (int j = 0; j < 90 && gap(hi) < 0.0; ++j) {
      lo = hi;
      hi *= 2.0;
    }
    if (gap(hi) < 0.0) throw Infeasible("tilt repair failed to bracket");
  }
  RootResult r = find_root(gap, lo, hi);
  return tilted(prob, logw, r.x);
}

// Unique feasible point of a two-atom problem.
std::vector<double> two_point_solution(const SimplexProblem& prob) {
  double x0 = prob.support[0], x1 = prob.support[1];
  if (prob.constraint == Constraint::Classical) {
    double p1 = (prob.m - x0) / (x1 - x0);
    return {1.0 - p1, p1};
  }
  auto gap = [&](double p1) {
    std::vector<double> p = {1.0 - p1, p1};
    return constraint_mean(prob, p) - prob.m;
  };
  RootResult r = find_root(gap, 1e-15, 1.0 - 1e-15);
  return {1.0 - r.x, r.x};
}

double divergence_or_inf(const SimplexProblem& prob,
                         const std::vector<double>& p) {
  try {
    return renyi_divergence_masses(p, prob.q_masses, prob.alpha);
  } catch (const Error&) {
    return kInf;
  }
}

// Minimize f on [lo, hi] with the bracketed maximizer; exceptions and
// non-finite values are treated as a worst-case objective.
double line_min(const std::function<double(double)>& f, double lo, double hi,
                double* fmin) {
  auto neg = [&](double t) -> double {
    double v;
    try {
      v = f(t);
    } catch (const Error&) {
      return -1e300;
    }
    return std::isfinite(v) ? -v : -1e300;
  };
  MaxResult mr = maximize_bracketed(neg, lo, hi, 1e-12, 1e-14);
  *fmin = -mr.value;
  return mr.x;
}

// Deterministic descent sweeps along null directions of (sum, mean): each
// triple of coordinates carries the one direction that moves all three while
// keeping both linear constraints exact, and gets an exact line search.
void polish_classical(const SimplexProblem& prob, std::vector<double>& p,
                      double& best) {
  std::size_t n = p.size();
  for (int sweep = 0; sweep < 80; ++sweep) {
    double at_entry = best;
    for (std::size_t i = 0; i + 2 < n; ++i) {
      for (std::size_t j = i + 1; j + 1 < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          double di = prob.support[j] - prob.support[k];
          double dj = prob.support[k] - prob.support[i];
          double dk = prob.support[i] - prob.support[j];
          double t_lo = -kInf, t_hi = kInf;
          auto clip = [&](double pi, double d) {
            if (d > 0.0) {
              t_lo = std::max(t_lo, -pi / d);
            } else if (d < 0.0) {
              t_hi = std::min(t_hi, -pi / d);
            }
          };
          clip(p[i], di);
          clip(p[j], dj);
          clip(p[k], dk);
          if (!(t_lo < t_hi)) continue;
          auto f = [&](double t) {
            std::vector<double> cand = p;
            cand[i] = std::max(cand[i] + t * di, 0.0);
            cand[j] = std::max(cand[j] + t * dj, 0.0);
            cand[k] = std::max(cand[k] + t * dk, 0.0);
            return divergence_or_inf(prob, cand);
          };
          double fmin;
          double t = line_min(f, t_lo, t_hi, &fmin);
          if (fmin < best) {
            p[i] = std::max(p[i] + t * di, 0.0);
            p[j] = std::max(p[j] + t * dj, 0.0);
            p[k] = std::max(p[k] + t * dk, 0.0);
            best = fmin;
          }
        }
      }
    }
    if (best > at_entry - 1e-13 * (1.0 + std::fabs(at_entry))) break;
  }
}

// Generalized-mean analog: one log-weight at a time, re-tilted back onto the
// constraint set for every trial step.
void polish_generalized(const SimplexProblem& prob, std::vector<double>& p,
                        double& best) {
  std::size_t n = p.size();
  std::vector<double> logw(n);
  for (std::size_t i = 0; i < n; ++i) {
    logw[i] = p[i] > 0.0 ? std::log(p[i]) : -745.0;
  }
  for (int sweep = 0; sweep < 80; ++sweep) {
    double at_entry = best;
    for (std::size_t i = 0; i < n; ++i) {
      auto f = [&](double s) {
        std::vector<double> lw = logw;
        lw[i] += s;
        return divergence_or_inf(prob, repair(prob, lw));
      };
      double fmin;
      double s = line_min(f, -8.0, 8.0, &fmin);
      if (fmin < best) {
        logw[i] += s;
        try {
          p = repair(prob, logw);
          best = fmin;
        } catch (const Infeasible&) {
          logw[i] -= s;
        }
      }
    }
    if (best > at_entry - 1e-13 * (1.0 + std::fabs(at_entry))) break;
  }
}

}  // namespace

OracleResult brute_force_solve(const SimplexProblem& prob, int iters,
                               std::uint64_t seed) {
  validate(prob);
  std::size_t n = prob.support.size();

  OracleResult out;
  out.seed = seed;
  out.best_start = 0;
  out.divergence = kInf;

  if (n == 2) {
    out.p = two_point_solution(prob);
    out.divergence = renyi_divergence_masses(out.p, prob.q_masses, prob.alpha);
    return out;
  }

  struct Cand {
    double value;
    std::vector<double> p;
    int start;
  };
  std::vector<Cand> topk;

  const int starts = 64;
  for (int s = 0; s < starts; ++s) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (s + 1));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);

    // Random positive start, repaired onto the constraint set.
    std::vector<double> logw(n);
    for (std::size_t i = 0; i < n; ++i) {
      logw[i] = std::log(prob.q_masses[i]) + 0.5 * gauss(rng);
    }
    std::vector<double> p;
    try {
      p = repair(prob, logw);
    } catch (const Infeasible&) {
      continue;
    }
    double best = renyi_divergence_masses(p, prob.q_masses, prob.alpha);

    double sigma = 0.5;
    int stale = 0;
    for (int it = 0; it < iters; ++it) {
      std::vector<double> cand;
      if (prob.constraint == Constraint::Classical) {
        // Move along a null direction of (sum, mean): keeps feasibility
        // exact without any re-solve.
        std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
        if (i == j || j == k || i == k) continue;
        double di = prob.support[j] - prob.support[k];
        double dj = prob.support[k] - prob.support[i];
        double dk = prob.support[i] - prob.support[j];
        double t_lo = -kInf, t_hi = kInf;
        auto clip = [&](double pi, double d) {
          if (d > 0.0) {
            t_lo = std::max(t_lo, -pi / d);
          } else if (d < 0.0) {
            t_hi = std::min(t_hi, -pi / d);
          }
        };
        clip(p[i], di);
        clip(p[j], dj);
        clip(p[k], dk);
        if (!(t_lo < t_hi)) continue;
        double t = sigma * gauss(rng) * 0.25 * (t_hi - t_lo);
        t = std::clamp(t, t_lo, t_hi);
        cand = p;
        cand[i] += t * di;
        cand[j] += t * dj;
        cand[k] += t * dk;
        for (double& v : cand) v = std::max(v, 0.0);
      } else {
        std::vector<double> lw(n);
        for (std::size_t i = 0; i < n; ++i) {
          lw[i] = p[i] > 0.0 ? std::log(p[i]) : -745.0;
        }
        lw[pick(rng)] += sigma * gauss(rng);
        try {
          cand = repair(prob, lw);
        } catch (const Infeasible&) {
          continue;
        }
      }
      double d;
      try {
        d = renyi_divergence_masses(cand, prob.q_masses, prob.alpha);
      } catch (const Error&) {
        continue;
      }
      if (d < best) {
        best = d;
        p = cand;
        stale = 0;
      } else if (++stale >= 50) {
        sigma *= 0.5;
        stale = 0;
        if (sigma < 1e-8) break;
      }
    }

    topk.push_back({best, p, s});
    std::stable_sort(topk.begin(), topk.end(), [](const Cand& a, const Cand& b) {
      return a.value < b.value;
    });
    if (topk.size() > 3) topk.resize(3);
  }

  // The random phase only has to land in the right basin; descent sweeps
  // finish the job on the few best starts.
  for (Cand& c : topk) {
    if (prob.constraint == Constraint::Classical) {
      polish_classical(prob, c.p, c.value);
    } else {
      polish_generalized(prob, c.p, c.value);
    }
    if (c.value < out.divergence) {
      out.divergence = c.value;
      out.p = c.p;
      out.best_start = c.start;
    }
  }
  if (!std::isfinite(out.divergence)) {
    throw Infeasible("no feasible oracle start succeeded");
  }
  return out;
}

}  // namespace renyi
