#include <cmath>
#include <doctest.h>
#include <limits>

#include "renyi/errors.hpp"
#include "renyi/partition.hpp"

using namespace renyi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * (1.0 + std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace

TEST_CASE("exponential partition closed forms") {
  ReferenceMeasure q = ReferenceMeasure::exponential(1.0);
  struct Row {
    double nu, gamma, xbar, want;
  };
  const Row rows[] = {
      {2.0, 0.5, 0.5, 1.8125},
      {-1.0, 0.7, 0.5, 0.89541649925389267},
      {-2.5, 1.2, 0.5, 1.5980776153247961},
      {0.5, 3.0, 0.5, 1.2993410353037659},
      {-0.5, 0.3, 1.4, 1.1017778390115207},
      {2.0, -0.8, 0.5, 0.77756935238343024},
      {0.5, -2.0, 1.5, 1.3600119254345911},
  };
  for (const Row& r : rows) {
    CAPTURE(r.nu);
    CAPTURE(r.gamma);
    PartitionEval e = partition_z(q, r.nu, r.gamma, r.xbar);
    REQUIRE_FALSE(e.infinite);
    CHECK(close_rel(e.value, r.want, 1e-11));
  }
}

TEST_CASE("poisson partition series") {
  ReferenceMeasure q = ReferenceMeasure::poisson(3.0);
  struct Row {
    double nu, gamma, xbar, want;
  };
  const Row rows[] = {
      {2.0, 0.5, 1.15, 4.455625},
      {-1.0, 0.5, 1.15, 0.67878352302570908},
      {-1.0, -0.7, 1.15, 0.71594102329948456},
      {3.7, -0.2, 2.5, 1.1412169626046667},
  };
  for (const Row& r : rows) {
    CAPTURE(r.nu);
    CAPTURE(r.gamma);
    PartitionEval e = partition_z(q, r.nu, r.gamma, r.xbar);
    REQUIRE_FALSE(e.infinite);
    CHECK(close_rel(e.value, r.want, 1e-11));
  }
  // Large exponent: the sum must be accumulated in log scale.
  PartitionEval big = partition_z(q, 101.0, -0.0069, 1.5);
  REQUIRE_FALSE(big.infinite);
  CHECK(close_rel(big.log_value, -0.46386089486720435, 1e-10));
}

TEST_CASE("uniform and bernoulli partition closed forms") {
  ReferenceMeasure u = ReferenceMeasure::uniform(0.0, 1.0);
  struct Row {
    double nu, gamma, xbar, want;
  };
  const Row rows[] = {
      {-1.0, 0.5, 0.25, 0.90397024748611448},
      {-2.5, 0.9, 0.5, 1.3917840120263158},
      {3.0, -1.5, 0.25, 0.59574381510416667},
      {1.0, 0.5, 0.25, 1.125},
  };
  for (const Row& r : rows) {
    CAPTURE(r.nu);
    CAPTURE(r.gamma);
    PartitionEval e = partition_z(u, r.nu, r.gamma, r.xbar);
    REQUIRE_FALSE(e.infinite);
    CHECK(close_rel(e.value, r.want, 1e-11));
  }

  ReferenceMeasure b = ReferenceMeasure::bernoulli(0.5);
  PartitionEval e = partition_z(b, 2.0, 0.5, 0.5);
  CHECK(close_rel(e.value, 1.0625, 1e-13));
}

TEST_CASE("divergent and empty configurations") {
  ReferenceMeasure ex = ReferenceMeasure::exponential(1.0);
  // Negative exponent with the sign boundary truncating the support.
  PartitionEval e = partition_z(ex, -1.0, -0.5, 1.0);
  CHECK(e.infinite);
  // Binding boundary inside (0, inf) with an exponent at or below -1.
  e = partition_z(ex, -1.5, 2.0, 1.0);
  CHECK(e.infinite);

  ReferenceMeasure u = ReferenceMeasure::uniform(0.0, 1.0);
  e = partition_z(u, -1.2, 1.9, 1.0);  // boundary at x = 1 - 1/1.9 in (0,1)
  CHECK(e.infinite);

  // Atom exactly on the sign boundary with a negative exponent diverges.
  ReferenceMeasure p = ReferenceMeasure::poisson(3.0);
  double gamma = 1.0 / (1.15 - 0.0);  // u(0) = 0
  e = partition_z(p, -1.0, gamma, 1.15);
  CHECK(e.infinite);

  // No support left: u < 0 everywhere on [0, 1].
  CHECK_THROWS_AS(partition_z(u, 1.0, -10.0, -1.0), EmptyDomain);
  CHECK_THROWS_AS(effective_domain(u, -10.0, -1.0), EmptyDomain);
}

TEST_CASE("gamma at zero is the total mass") {
  for (const ReferenceMeasure& q :
       {ReferenceMeasure::uniform(0.0, 1.0), ReferenceMeasure::exponential(2.0),
        ReferenceMeasure::bernoulli(0.3), ReferenceMeasure::poisson(2.0)}) {
    PartitionEval e = partition_z(q, 2.7, 0.0, 0.4);
    CHECK(close_rel(e.value, 1.0, 1e-12));
  }
}

TEST_CASE("recurrence in the exponent") {
  // Z_{nu+1} = Z_nu (1 + gamma (E_nu - xbar))
  struct Inst {
    ReferenceMeasure q;
    double nu, gamma, xbar;
  };
  const Inst insts[] = {
      {ReferenceMeasure::exponential(1.0), 1.3, 0.4, 0.8},
      {ReferenceMeasure::uniform(0.0, 1.0), -0.4, 0.9, 0.5},
      {ReferenceMeasure::poisson(3.0), -2.0, 0.3, 1.15},
      {ReferenceMeasure::bernoulli(0.5), 0.7, -0.6, 0.25},
  };
  for (const Inst& in : insts) {
    CAPTURE(in.nu);
    double za = partition_z(in.q, in.nu, in.gamma, in.xbar).value;
    double zb = partition_z(in.q, in.nu + 1.0, in.gamma, in.xbar).value;
    double e = mean_under(in.q, in.nu, in.gamma, in.xbar);
    CHECK(close_rel(zb, za * (1.0 + in.gamma * (e - in.xbar)), 1e-9));
  }
}

TEST_CASE("derivatives against finite differences") {
  struct Inst {
    ReferenceMeasure q;
    double nu, gamma, xbar;
  };
  const Inst insts[] = {
      {ReferenceMeasure::exponential(1.0), 2.0, 0.5, 0.5},
      {ReferenceMeasure::uniform(0.0, 1.0), 3.0, -0.8, 0.5},
      {ReferenceMeasure::poisson(3.0), 2.0, 0.4, 1.15},
      {ReferenceMeasure::bernoulli(0.5), 2.0, 0.5, 0.5},
  };
  for (const Inst& in : insts) {
    CAPTURE(in.nu);
    double h = 1e-6;
    double zp = partition_z(in.q, in.nu, in.gamma + h, in.xbar).value;
    double zm = partition_z(in.q, in.nu, in.gamma - h, in.xbar).value;
    double dz = partition_dz(in.q, in.nu, in.gamma, in.xbar, 0.0);
    CHECK(close_rel(dz, (zp - zm) / (2.0 * h), 1e-5));

    // Wider step for the second difference to stay above roundoff.
    double h2 = 1e-4;
    double zp2 = partition_z(in.q, in.nu, in.gamma + h2, in.xbar).value;
    double zm2 = partition_z(in.q, in.nu, in.gamma - h2, in.xbar).value;
    double z0 = partition_z(in.q, in.nu, in.gamma, in.xbar).value;
    double d2z = partition_d2z(in.q, in.nu, in.gamma, in.xbar);
    CHECK(close_rel(d2z, (zp2 - 2.0 * z0 + zm2) / (h2 * h2), 1e-4));
    CHECK(d2z > 0.0);
  }
}

TEST_CASE("derivative condition violations") {
  // Continuous: differentiating through a binding edge needs nu > order - 1.
  ReferenceMeasure u = ReferenceMeasure::uniform(0.0, 1.0);
  double gamma = 1.9, xbar = 1.0;  // boundary inside (0, 1)
  CHECK_NOTHROW(partition_dz(u, 0.5, gamma, xbar, 0.0));
  CHECK_THROWS_AS(partition_d2z(u, 0.5, gamma, xbar), ConditionViolated);
  CHECK_THROWS_AS(partition_dz(u, -0.2, gamma, xbar, 0.0), ConditionViolated);

  // Discrete: an atom sitting exactly on the boundary needs nu > order.
  ReferenceMeasure p = ReferenceMeasure::poisson(3.0);
  double g0 = 1.0 / (1.15 - 0.0);
  CHECK_NOTHROW(partition_dz(p, 1.5, g0, 1.15, 0.0));
  CHECK_THROWS_AS(partition_dz(p, 0.5, g0, 1.15, 0.0), ConditionViolated);
  CHECK_THROWS_AS(partition_d2z(p, 1.5, g0, 1.15), ConditionViolated);
}

TEST_CASE("tilted means") {
  ReferenceMeasure u = ReferenceMeasure::uniform(0.0, 1.0);
  CHECK(close_rel(mean_under(u, 1.0, 0.5, 0.5), 13.0 / 24.0, 1e-12));
  CHECK(close_rel(mean_under(u, 0.0, 0.7, 0.2), 0.5, 1e-12));

  ReferenceMeasure b = ReferenceMeasure::bernoulli(0.5);
  // u(0) = 0.75, u(1) = 1.25 under gamma = 0.5, xbar = 0.5.
  double w0 = 0.5 * 0.75, w1 = 0.5 * 1.25;
  CHECK(close_rel(mean_under(b, 1.0, 0.5, 0.5), w1 / (w0 + w1), 1e-13));

  CHECK(close_rel(second_moment_about(u, 0.5), 1.0 / 12.0, 1e-12));
  CHECK(close_rel(second_moment_about(ReferenceMeasure::exponential(1.0), 1.0),
                  1.0, 1e-10));
}

TEST_CASE("quadrature cross-check of the closed forms") {
  ReferenceMeasure ex = ReferenceMeasure::exponential(1.0);
  PartitionEval closed = partition_z(ex, -0.5, 0.3, 1.4);
  PartitionEval quad = partition_z_by_quadrature(ex, -0.5, 0.3, 1.4);
  CHECK(close_rel(closed.value, quad.value, 1e-9));

  ReferenceMeasure u = ReferenceMeasure::uniform(0.0, 1.0);
  closed = partition_z(u, -2.5, 0.9, 0.5);
  quad = partition_z_by_quadrature(u, -2.5, 0.9, 0.5);
  CHECK(close_rel(closed.value, quad.value, 1e-9));
}

TEST_CASE("effective domain intersections") {
  ReferenceMeasure u = ReferenceMeasure::uniform(0.0, 1.0);
  DomainSpec d = effective_domain(u, 2.0, 1.0);  // u >= 0 iff x >= 0.5
  CHECK(d.lo == doctest::Approx(0.5));
  CHECK(d.hi == doctest::Approx(1.0));

  ReferenceMeasure p = ReferenceMeasure::poisson(3.0);
  d = effective_domain(p, -0.25, 2.0);  // u >= 0 iff x <= 6
  CHECK(d.integer_range);
  CHECK(d.hi == doctest::Approx(6.0));
  CHECK(d.lo == doctest::Approx(0.0));

  d = effective_domain(u, 0.0, 0.3);
  CHECK(d.lo == doctest::Approx(0.0));
  CHECK(d.hi == doctest::Approx(1.0));
  CHECK(partition_z(u, -3.0, 0.0, 0.3).value == doctest::Approx(1.0));
}
