#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace renyi {

// One row of the verification report.
struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

struct CheckOptions {
  std::uint64_t seed = 20240901ULL;
  // Multiplies every pass tolerance; setting it tiny forces failures and
  // exercises the reporting path.
  double tol_scale = 1.0;
  // Trims sample counts for fast unit-test runs.
  bool quick = false;
};

// 17-significant-digit formatting used for every CSV value; round-trips
// doubles exactly through strtod.
std::string format_sig17(double v);

CheckResult check_z_recurrence(const CheckOptions& o);
CheckResult check_dz_finite_difference(const CheckOptions& o);
CheckResult check_d2z_positive(const CheckOptions& o);
CheckResult check_closed_vs_quadrature(const CheckOptions& o);
CheckResult check_stationarity(const CheckOptions& o);
CheckResult check_nonnegativity(const CheckOptions& o);
CheckResult check_convexity(const CheckOptions& o);
CheckResult check_duality(const CheckOptions& o);
CheckResult check_pythagorean(const CheckOptions& o);
CheckResult check_optimality(const CheckOptions& o);
CheckResult check_escort_involution(const CheckOptions& o);
CheckResult check_bregman_properties(const CheckOptions& o);
CheckResult check_bregman_limit(const CheckOptions& o);
CheckResult check_kmax_monotonicity(const CheckOptions& o);
CheckResult check_oracle_agreement(const CheckOptions& o);
CheckResult check_oracle_form(const CheckOptions& o);
CheckResult check_csv_roundtrip(const CheckOptions& o);
CheckResult check_determinism(const CheckOptions& o);

// Full suite in a fixed order.
std::vector<CheckResult> run_all_checks(const CheckOptions& o);

}  // namespace renyi
