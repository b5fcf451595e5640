#pragma once

#include <string>
#include <utility>
#include <vector>

#include "renyi/measures.hpp"
#include "renyi/partition.hpp"
#include "renyi/quadrature.hpp"
#include "renyi/solver.hpp"

namespace renyi {

// Member of the optimum family: density (1 + gamma (x - xbar))^nu Q(x) / Z
// restricted to the subset where the base is nonnegative.
struct MaxEntDistribution {
  ReferenceMeasure q;
  double nu;
  double gamma;
  double xbar;
  double log_z;
  DomainSpec domain;
};

// Normalizes an arbitrary family member; throws when Z diverges or the
// domain is empty.
MaxEntDistribution family_member(const ReferenceMeasure& q, double nu,
                                 double gamma, double xbar);

// The constrained optimum at mean level m.
MaxEntDistribution maxent_distribution(const ReferenceMeasure& q, Constraint c,
                                       double alpha, double m, int kmax = 64);

// log of the density ratio dP/dQ at x; -inf outside the domain.
double log_density_ratio(const MaxEntDistribution& d, double x);

// Density with respect to the natural base measure (Lebesgue density times
// the ratio for continuous kinds, point mass for discrete kinds).
double density(const MaxEntDistribution& d, double x);

double classical_mean(const MaxEntDistribution& d);

// Mean of the order-alpha escort of d taken relative to its reference.
double generalized_mean(const MaxEntDistribution& d, double alpha);

// Escort transform relative to the reference: exponent scales by alpha.
MaxEntDistribution escort_of(const MaxEntDistribution& d, double alpha);

// E_Q[prod_i (1 + gamma_i (X - xbar_i))^{e_i}] over the subset where every
// base is positive, in signed log form.
struct PowerFactor {
  double expo;
  double gamma;
  double xbar;
};
LogVal log_expect_product(const ReferenceMeasure& q,
                          const std::vector<PowerFactor>& factors);

// Divergence of order alpha from the family member to its own reference.
double renyi_divergence_to_ref(const MaxEntDistribution& p, double alpha);

// Divergence between two family members over the same reference.
double renyi_divergence(const MaxEntDistribution& p1,
                        const MaxEntDistribution& p2, double alpha);

// Divergence between two mass vectors on a shared support; alpha = 1 gives
// the Kullback form.
double renyi_divergence_masses(const std::vector<double>& p,
                               const std::vector<double>& q, double alpha);

// regime_flag values used across the library and the CLI.
inline constexpr int kRegimeInterior = 0;   // interior dual maximum
inline constexpr int kRegimeLimit = 1;      // alpha = 1 closed-form limit
inline constexpr int kRegimeZeroEscape = 2; // unattained infimum, value 0

struct FunctionalPoint {
  double m;
  double value;
  double gamma_star;
  double nu;
  double achieved_mean;
  int regime_flag;
  bool converged;
  std::string diagnostic;
};

FunctionalPoint entropy_functional(const ReferenceMeasure& q, Constraint c,
                                   double alpha, double m, int kmax = 64);

struct FunctionalCurve {
  Constraint constraint;
  double alpha;
  std::vector<double> m_grid;
  std::vector<FunctionalPoint> points;
};

// Curve over an m-grid; failed points carry NaN values plus a diagnostic
// instead of aborting the sweep. Points evaluate concurrently.
FunctionalCurve functional_curve(const ReferenceMeasure& q, Constraint c,
                                 double alpha, const std::vector<double>& m_grid,
                                 int kmax = 64);

// Equally spaced grid inset from the support hull (or from sensible
// quantile bounds for unbounded kinds).
std::vector<double> default_m_grid(const ReferenceMeasure& q, int n);

// (F_alpha^G(m), F_{1/alpha}^C(m)) from two independent solves.
std::pair<double, double> duality_check(const ReferenceMeasure& q, double alpha,
                                        double m, int kmax = 64);

// Envelope derivative dF^G/dm = -gamma*(m) * xi.
double bregman_derivative(const ReferenceMeasure& q, double alpha, double m,
                          int kmax = 64);

// Object-space divergence between mean levels, built on the G functional.
double bregman_divergence(const ReferenceMeasure& q, double alpha, double m2,
                          double m1, int kmax = 64);

enum class Alpha1Branch { Principal, FromBelow, FromAbove };

struct Alpha1Value {
  double value;
  int regime_flag;
  double tilt;  // maximizing exponential tilt of the limit problem
};

// alpha = 1 limit of the functionals: closed forms for the named kinds,
// the Cramer transform otherwise. The one-sided branches surface the
// reference restrictions (zero regime, one-sided feasibility).
Alpha1Value limit_alpha1(const ReferenceMeasure& q, Constraint c, double m,
                         Alpha1Branch branch = Alpha1Branch::Principal);

double log_mgf(const ReferenceMeasure& q, double t);

struct CramerResult {
  double value;
  double tilt;
};

// sup_t { t m - log mgf } by bracketed concave maximization.
CramerResult cramer_transform(const ReferenceMeasure& q, double m);

// Concurrency cap: RENYI_MAXENT_THREADS when set, hardware count otherwise.
int thread_budget();

}  // namespace renyi
