#pragma once

#include <optional>
#include <vector>

#include "renyi/measures.hpp"

namespace renyi {

enum class Constraint { Classical, Generalized };

// Order index with the companion exponent xi = 1/(alpha - 1), which is
// undefined at alpha = 1 where the limit functionals take over.
struct AlphaIndex {
  double alpha;
  double xi;
  bool xi_defined;
  bool is_limit;
};

AlphaIndex make_alpha_index(double alpha);

// Exponent of the dual partition function: alpha/(alpha-1) for classical
// constraints, 1/(1-alpha) for generalized ones. Never lands in (0, 1].
double dual_exponent(Constraint c, double alpha);

// Exponent of the optimizing density (1 + gamma (x - m))^nu relative to q.
double primal_exponent(Constraint c, double alpha);

// Maximal open interval on which the dual is smooth. Endpoints flagged
// singular carry a divergence of Z (an atom reaching the sign boundary).
struct GammaSegment {
  double lo;
  double hi;
  bool open_lo;
  bool open_hi;
  bool singular_lo;
  bool singular_hi;
};

struct LocalMax {
  GammaSegment segment;
  double gamma;
  double value;
  bool converged;
};

struct DualSolution {
  Constraint constraint;
  double alpha;
  double m;
  double gamma_star;
  double value;
  std::vector<LocalMax> local_maxima;
  bool converged;
};

// D(gamma) = -log Z_nu(gamma, m) with the dual exponent; -inf where Z
// diverges or the domain empties.
double dual_value(const ReferenceMeasure& q, Constraint c, double alpha,
                  double m, double gamma);

// Smoothness segments of the dual. kmax caps how many pole-bounded segments
// are enumerated per sign of gamma for discrete measures with negative dual
// exponent; for a Poisson reference the poles accumulate at zero from below,
// so the capped enumeration walks inward from the outermost pole and the
// accumulation gap next to zero is never spanned.
std::vector<GammaSegment> enumerate_segments(const ReferenceMeasure& q,
                                             Constraint c, double alpha,
                                             double m, int kmax = 64);

// Interior maximum of the dual on one segment: bracketed golden/parabolic
// search followed by a stationarity polish that re-solves the mean-match
// condition m = E_{nu-1}[X] inside the converged bracket. Empty when the
// segment has no interior maximum.
std::optional<LocalMax> maximize_on_segment(const ReferenceMeasure& q,
                                            Constraint c, double alpha,
                                            double m, const GammaSegment& seg);

// Full dual solve: the functional value is the smallest of the per-segment
// interior maximum values, ties within 1e-10 resolved toward smaller |gamma|.
DualSolution solve_constraint(const ReferenceMeasure& q, Constraint c,
                              double alpha, double m, int kmax = 64);

}  // namespace renyi
