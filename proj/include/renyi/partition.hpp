#pragma once

#include "renyi/measures.hpp"

namespace renyi {

// Intersection of the reference support with {x : 1 + gamma (x - xbar) >= 0}.
struct DomainSpec {
  bool integer_range;  // lo/hi are lattice bounds when true
  double lo;
  double hi;
};

enum class EvalMethod { ClosedForm, Quadrature, Series };

struct PartitionEval {
  double log_value;      // +inf encodes a divergent integral
  double value;          // exp(log_value), saturating
  double est_abs_error;  // estimate of absolute error in value
  EvalMethod method;
  bool infinite;
};

// Throws EmptyDomain when the intersection carries no mass.
DomainSpec effective_domain(const ReferenceMeasure& q, double gamma, double xbar);

// Z_nu(gamma, xbar) = int_D (1 + gamma (x - xbar))^nu dQ over the effective
// domain. Closed forms cover uniform, exponential and the bounded discrete
// kinds; Poisson goes through its series; gridded densities are integrated
// adaptively. Divergent cases come back with the infinite flag set rather
// than as an exception.
PartitionEval partition_z(const ReferenceMeasure& q, double nu, double gamma,
                          double xbar);

// Same quantity forced through adaptive quadrature; only the continuous
// kinds support this path. Used to cross-check the closed forms.
PartitionEval partition_z_by_quadrature(const ReferenceMeasure& q, double nu,
                                        double gamma, double xbar);

// Total derivative of Z_nu with respect to gamma, with xbar moving at the
// supplied rate. Throws ConditionViolated when the defining integral is not
// differentiable (constraint boundary inside the support with too small an
// exponent, or sitting on an atom).
double partition_dz(const ReferenceMeasure& q, double nu, double gamma,
                    double xbar, double dxbar_dgamma);

// Second gamma-derivative at fixed xbar.
double partition_d2z(const ReferenceMeasure& q, double nu, double gamma,
                     double xbar);

// Mean of x under the normalized tilted measure u^nu dQ / Z_nu.
double mean_under(const ReferenceMeasure& q, double nu, double gamma,
                  double xbar);

// E_Q[(x - c)^2], used by the gamma = 0 derivative limits.
double second_moment_about(const ReferenceMeasure& q, double c);

}  // namespace renyi
