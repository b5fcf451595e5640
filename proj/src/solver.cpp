#include "renyi/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "renyi/bracket.hpp"
#include "renyi/errors.hpp"
#include "renyi/partition.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Value ties between local maxima resolved toward smaller |gamma|.
constexpr double kTieTol = 1e-10;

double segment_inset(double lo, double hi) {
  double alo = std::isfinite(lo) ? std::fabs(lo) : 0.0;
  double ahi = std::isfinite(hi) ? std::fabs(hi) : 0.0;
  return 1e-9 * (1.0 + alo + ahi);
}

// Natural scale of gamma: the dual varies on scales of one over the spread
// of q around the target mean.
double gamma_scale(const ReferenceMeasure& q, double m) {
  double var = 0.0;
  try {
    var = second_moment_about(q, m);
  } catch (const Error&) {
    var = 1.0;
  }
  if (!std::isfinite(var) || var <= 0.0) var = 1.0;
  return 1.0 / (1.0 + std::sqrt(var));
}

struct Probe {
  double x;
  double d;
};

// Expanding probe sweep from `anchor` in direction `dir` (+1 or -1),
// stopping at `limit` (possibly infinite). Returns probes in sweep order.
std::vector<Probe> sweep(const std::function<double(double)>& f, double anchor,
                         double dir, double limit, double step) {
  std::vector<Probe> out;
  double offset = step;
  for (int j = 0; j < 70; ++j) {
    double x = anchor + dir * offset;
    if (std::isfinite(limit)) {
      if ((dir > 0 && x >= limit) || (dir < 0 && x <= limit)) break;
    }
    double d = f(x);
    // A rogue non-value at one probe must not poison the best-probe scan.
    if (std::isnan(d)) d = -kInf;
    out.push_back({x, d});
    if (std::fabs(x) > 1e15) break;
    offset *= 2.0;
  }
  return out;
}

}  // namespace

AlphaIndex make_alpha_index(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("alpha must be a positive finite number");
  }
  AlphaIndex idx;
  idx.alpha = alpha;
  idx.is_limit = alpha == 1.0;
  idx.xi_defined = !idx.is_limit;
  idx.xi = idx.xi_defined ? 1.0 / (alpha - 1.0)
                          : std::numeric_limits<double>::quiet_NaN();
  return idx;
}

double dual_exponent(Constraint c, double alpha) {
  AlphaIndex idx = make_alpha_index(alpha);
  if (!idx.xi_defined) {
    throw ConfigError("dual exponent undefined at alpha = 1; use the limit functionals");
  }
  return c == Constraint::Classical ? idx.xi + 1.0 : -idx.xi;
}

double primal_exponent(Constraint c, double alpha) {
  AlphaIndex idx = make_alpha_index(alpha);
  if (!idx.xi_defined) {
    throw ConfigError("primal exponent undefined at alpha = 1; use the limit functionals");
  }
  return c == Constraint::Classical ? idx.xi : -idx.xi;
}

double dual_value(const ReferenceMeasure& q, Constraint c, double alpha,
                  double m, double gamma) {
  double nu = dual_exponent(c, alpha);
  try {
    PartitionEval e = partition_z(q, nu, gamma, m);
    if (e.infinite) return -kInf;
    return -e.log_value;
  } catch (const EmptyDomain&) {
    return -kInf;
  }
}

namespace {

std::vector<GammaSegment> continuous_segments(const ReferenceMeasure& q,
                                              double nu, double m) {
  SupportDesc sup = q.support();
  if (q.kind == MeasureKind::Exponential && nu < 0.0) {
    // Z is declared divergent for negative exponents once gamma leaves
    // [0, 1/m]; the lone smooth piece starts at zero.
    GammaSegment s{0.0, 1.0 / m, false, true, false, nu <= -1.0};
    return {s};
  }
  if (nu < 0.0 && std::isfinite(sup.lower) && std::isfinite(sup.upper)) {
    double onset_neg = -1.0 / (sup.upper - m);
    double onset_pos = 1.0 / (m - sup.lower);
    if (nu <= -1.0) {
      // The sign boundary crossing an edge of the support makes Z diverge,
      // so the dual lives between the two onset points.
      GammaSegment s{onset_neg, onset_pos, true, true, true, true};
      return {s};
    }
    // Integrable edge singularity: Z stays finite past the onsets but the
    // dual kinks there, so search each smooth piece separately.
    return {
        {-kInf, onset_neg, true, true, false, false},
        {onset_neg, onset_pos, true, true, false, false},
        {onset_pos, kInf, true, true, false, false},
    };
  }
  GammaSegment s{-kInf, kInf, true, true, false, false};
  return {s};
}

// Pole singularities are one-sided: the pole of atom x only blows Z up on
// the side of gamma = 1/(m - x) where that atom still lies inside the
// domain (gamma below the pole for atoms under m, above it for atoms over
// m). On the far side the atom drops out of the domain and the dual jumps
// to a finite value. Segments therefore diverge toward their inner-facing
// pole end and stay finite at the outer-facing one.
std::vector<GammaSegment> discrete_segments(const ReferenceMeasure& q,
                                            double nu, double m, int kmax) {
  if (nu >= 0.0) {
    GammaSegment s{-kInf, kInf, true, true, false, false};
    return {s};
  }

  // Poles of Z at gamma = 1/(m - x) for each atom x != m, split by sign
  // and ordered nearest zero first.
  std::vector<double> pos;
  std::vector<double> neg;
  bool pos_truncated = false;
  bool neg_truncated = false;  // farthest-from-zero poles dropped

  if (q.kind == MeasureKind::Poisson) {
    long kfloor = static_cast<long>(std::floor(m));
    long count_below = kfloor + 1;
    if (std::floor(m) == m) count_below -= 1;  // x = m carries no pole
    for (long k = 0; k < count_below && static_cast<int>(pos.size()) < kmax;
         ++k) {
      pos.push_back(1.0 / (m - static_cast<double>(k)));
    }
    pos_truncated = count_below > static_cast<long>(pos.size());
    // Atoms above m give negative poles accumulating at zero from below:
    // enumerate outermost-inward and leave the accumulation gap next to
    // zero unspanned.
    long kceil = static_cast<long>(std::ceil(m));
    if (std::floor(m) == m) kceil += 1;
    for (long k = kceil; static_cast<int>(neg.size()) < kmax; ++k) {
      neg.push_back(1.0 / (m - static_cast<double>(k)));
    }
    std::reverse(neg.begin(), neg.end());  // nearest zero first
  } else {
    for (double x : q.atom_xs()) {
      if (std::fabs(x - m) <= 1e-13 * (1.0 + std::fabs(m))) continue;
      if (x < m) {
        pos.push_back(1.0 / (m - x));
      } else {
        neg.push_back(1.0 / (m - x));
      }
    }
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end(), std::greater<double>());
    if (static_cast<int>(pos.size()) > kmax) {
      pos.resize(kmax);
      pos_truncated = true;
    }
    if (static_cast<int>(neg.size()) > kmax) {
      neg.resize(kmax);
      neg_truncated = true;
    }
  }

  std::vector<GammaSegment> segs;

  // Central piece around gamma = 0. For Poisson the negative side next to
  // zero is the accumulation zone, so the piece starts exactly at zero.
  bool poisson = q.kind == MeasureKind::Poisson;
  double central_lo = poisson ? 0.0 : (neg.empty() ? -kInf : neg.front());
  bool central_lo_sing = !poisson && !neg.empty();
  double central_hi = pos.empty() ? kInf : pos.front();
  bool central_hi_sing = !pos.empty();
  segs.push_back(
      {central_lo, central_hi, true, true, central_lo_sing, central_hi_sing});

  // Positive gaps: finite at the left end (the lower pole's atom has just
  // left the domain), divergent at the right end.
  for (std::size_t i = 0; i + 1 < pos.size(); ++i) {
    segs.push_back({pos[i], pos[i + 1], true, true, false, true});
  }
  if (!pos.empty() && !pos_truncated) {
    segs.push_back({pos.back(), kInf, true, true, false, false});
  }

  // Negative gaps mirrored: divergent at the left (inner-facing) end.
  for (std::size_t i = 0; i + 1 < neg.size(); ++i) {
    segs.push_back({neg[i + 1], neg[i], true, true, true, false});
  }
  if (!neg.empty() && (poisson || !neg_truncated)) {
    segs.push_back({-kInf, neg.back(), true, true, false, false});
  }
  return segs;
}

}  // namespace

std::vector<GammaSegment> enumerate_segments(const ReferenceMeasure& q,
                                             Constraint c, double alpha,
                                             double m, int kmax) {
  if (kmax < 1) throw ConfigError("kmax must be at least 1");
  double nu = dual_exponent(c, alpha);
  if (q.is_discrete()) return discrete_segments(q, nu, m, kmax);
  return continuous_segments(q, nu, m);
}

namespace {

struct SearchBracket {
  double lo;
  double hi;
  bool ok;
};

// Locate a finite bracket certain to contain any interior maximum of f on
// the open segment. Returns ok = false when f keeps rising into an open end
// (no interior maximum there).
SearchBracket locate_bracket(const std::function<double(double)>& f,
                             const GammaSegment& seg, double scale) {
  bool lo_fin = std::isfinite(seg.lo);
  bool hi_fin = std::isfinite(seg.hi);
  if (lo_fin && hi_fin) {
    double eps = segment_inset(seg.lo, seg.hi);
    double a = seg.lo + eps;
    double b = seg.hi - eps;
    if (!(a < b)) return {0.0, 0.0, false};
    return {a, b, true};
  }

  double step = 0.5 * scale;
  if (lo_fin && !hi_fin) {
    double eps = 1e-9 * (1.0 + std::fabs(seg.lo));
    double anchor = seg.lo + eps;
    std::vector<Probe> ps = sweep(f, anchor, +1.0, kInf, step);
    if (ps.empty()) return {0.0, 0.0, false};
    size_t best = 0;
    for (size_t i = 1; i < ps.size(); ++i) {
      if (ps[i].d > ps[best].d) best = i;
    }
    if (best + 1 >= ps.size()) return {0.0, 0.0, false};  // still rising
    double a = best == 0 ? anchor : ps[best - 1].x;
    return {a, ps[best + 1].x, true};
  }
  if (!lo_fin && hi_fin) {
    double eps = 1e-9 * (1.0 + std::fabs(seg.hi));
    double anchor = seg.hi - eps;
    std::vector<Probe> ps = sweep(f, anchor, -1.0, -kInf, step);
    if (ps.empty()) return {0.0, 0.0, false};
    size_t best = 0;
    for (size_t i = 1; i < ps.size(); ++i) {
      if (ps[i].d > ps[best].d) best = i;
    }
    if (best + 1 >= ps.size()) return {0.0, 0.0, false};
    double b = best == 0 ? anchor : ps[best - 1].x;
    return {ps[best + 1].x, b, true};
  }

  // Doubly infinite: sweep both directions from zero and bracket the best
  // probe between its neighbours.
  std::vector<Probe> ps = sweep(f, 0.0, +1.0, kInf, step);
  std::vector<Probe> ns = sweep(f, 0.0, -1.0, -kInf, step);
  std::vector<Probe> all;
  for (auto it = ns.rbegin(); it != ns.rend(); ++it) all.push_back(*it);
  all.push_back({0.0, f(0.0)});
  for (const Probe& p : ps) all.push_back(p);
  if (all.size() < 3) return {0.0, 0.0, false};
  size_t best = 0;
  for (size_t i = 1; i < all.size(); ++i) {
    if (all[i].d > all[best].d) best = i;
  }
  if (best == 0 || best + 1 == all.size()) return {0.0, 0.0, false};
  return {all[best - 1].x, all[best + 1].x, true};
}

}  // namespace

std::optional<LocalMax> maximize_on_segment(const ReferenceMeasure& q,
                                            Constraint c, double alpha,
                                            double m,
                                            const GammaSegment& seg) {
  double nu = dual_exponent(c, alpha);
  auto D = [&](double g) { return dual_value(q, c, alpha, m, g); };

  SearchBracket br = locate_bracket(D, seg, gamma_scale(q, m));
  if (!br.ok) return std::nullopt;

  MaxResult mr = maximize_bracketed(D, br.lo, br.hi);
  if (!std::isfinite(mr.value)) return std::nullopt;

  // A genuine interior maximum satisfies m = E_{nu-1}[X]. Z is convex on
  // the segment, so the dual has at most one stationary point there and a
  // sign change of the mean gap certifies it. Without a sign change the
  // bracketed search has merely pinned itself against an endpoint (for
  // instance a pole whose atom mass is too small for the divergence to
  // register in double precision), so the candidate is discarded.
  auto mean_gap = [&](double g) -> double {
    return mean_under(q, nu - 1.0, g, m) - m;
  };

  // The crossing may hide between the search inset and a pole: toward
  // singular ends Z stays finite and evaluable arbitrarily close, so the
  // polish bracket is allowed past the inset up to a small guard.
  double ext_lo = br.lo;
  double ext_hi = br.hi;
  if (std::isfinite(seg.lo) && seg.singular_lo)
    ext_lo = seg.lo + 1e-11 * (1.0 + std::fabs(seg.lo));
  if (std::isfinite(seg.hi) && seg.singular_hi)
    ext_hi = seg.hi - 1e-11 * (1.0 + std::fabs(seg.hi));

  double gamma = mr.x;
  bool polished = false;
  double span = br.hi - br.lo;
  double h = std::max(1e-7 * (1.0 + std::fabs(gamma)), 1e-12 * span);
  for (int round = 0; round < 16 && !polished; ++round) {
    double a = std::max(ext_lo, gamma - h);
    double b = std::min(ext_hi, gamma + h);
    if (!(a < b)) break;
    double ga, gb;
    try {
      ga = mean_gap(a);
      gb = mean_gap(b);
    } catch (const Error&) {
      break;
    }
    if (std::isfinite(ga) && std::isfinite(gb) &&
        ((ga <= 0.0 && gb >= 0.0) || (ga >= 0.0 && gb <= 0.0))) {
      try {
        RootResult rr = find_root(mean_gap, a, b);
        gamma = rr.x;
        polished = rr.converged;
      } catch (const Error&) {
      }
      break;
    }
    if (a == ext_lo && b == ext_hi) break;
    h *= 8.0;
  }
  if (!polished) return std::nullopt;

  double value = D(gamma);
  if (!std::isfinite(value)) return std::nullopt;

  LocalMax lm;
  lm.segment = seg;
  lm.gamma = gamma;
  lm.value = value;
  lm.converged = true;
  return lm;
}

DualSolution solve_constraint(const ReferenceMeasure& q, Constraint c,
                              double alpha, double m, int kmax) {
  AlphaIndex idx = make_alpha_index(alpha);
  if (idx.is_limit) {
    throw ConfigError("alpha = 1 has no dual; use the limit functionals");
  }
  SupportDesc sup = q.support();
  if (!(m > sup.lower && m < sup.upper)) {
    throw InfeasibleMean("target mean lies outside the open support hull");
  }

  DualSolution sol;
  sol.constraint = c;
  sol.alpha = alpha;
  sol.m = m;

  // Matching the reference mean needs no tilt at all.
  double mq = q.mean_q();
  if (std::fabs(m - mq) <= 1e-12 * (1.0 + std::fabs(m))) {
    GammaSegment whole{-kInf, kInf, true, true, false, false};
    sol.gamma_star = 0.0;
    sol.value = 0.0;
    sol.local_maxima.push_back({whole, 0.0, 0.0, true});
    sol.converged = true;
    return sol;
  }

  std::vector<GammaSegment> segs = enumerate_segments(q, c, alpha, m, kmax);
  for (const GammaSegment& s : segs) {
    std::optional<LocalMax> lm = maximize_on_segment(q, c, alpha, m, s);
    if (lm) sol.local_maxima.push_back(*lm);
  }
  if (sol.local_maxima.empty()) {
    throw NoSolution("dual has no interior maximum on any segment");
  }

  double vmin = kInf;
  for (const LocalMax& lm : sol.local_maxima) vmin = std::min(vmin, lm.value);
  const LocalMax* pick = nullptr;
  for (const LocalMax& lm : sol.local_maxima) {
    if (lm.value > vmin + kTieTol) continue;
    if (!pick || std::fabs(lm.gamma) < std::fabs(pick->gamma)) pick = &lm;
  }
  sol.gamma_star = pick->gamma;
  sol.value = pick->value;
  sol.converged = pick->converged;
  return sol;
}

}  // namespace renyi
