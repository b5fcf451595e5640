#pragma once

namespace renyi {

// log of the upper incomplete gamma function Gamma(s, x) for any real order s
// and x >= 0. The function is positive for x > 0, so the log is well defined.
// Returns +inf when the value diverges (x == 0 with s <= 0).
//
// Orders within 1e-11 of a nonpositive integer are snapped to the integer and
// evaluated through the exact downward recurrence seeded with E1; between that
// snap radius and roughly 1e-6 the recurrence passes near a removable point
// and relative accuracy degrades gradually.
double log_gamma_upper(double s, double x);

// Exponential integral E1(x) = Gamma(0, x) for 0 < x < 1, by series.
double exp1_small(double x);

// Continued-fraction factor h with Gamma(s, x) = e^{-x} x^s h, usable when
// gamma_upper_cf_ok. Callers that would otherwise cancel the large e^{-x}
// piece against their own e^{+x} factor should combine log h directly.
bool gamma_upper_cf_ok(double s, double x);
double log_gamma_upper_cf_factor(double s, double x);

// log of int_0^y t^(s-1) e^t dt for s > 0, y > 0. The integrand grows like
// e^y, so the result is returned in log scale.
double log_grow_integral(double s, double y);

// Asymptotic factor S with int_0^y t^(s-1) e^t dt = y^{s-1} e^y S, usable
// when grow_asym_ok. Serves the same cancellation-avoidance purpose.
bool grow_asym_ok(double s, double y);
double log_grow_asym_factor(double s, double y);

}  // namespace renyi
