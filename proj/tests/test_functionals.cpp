#include <cmath>
#include <initializer_list>
#include <cstdlib>
#include <doctest.h>
#include <limits>

#include "renyi/errors.hpp"
#include "renyi/functionals.hpp"

using namespace renyi;

TEST_CASE("bernoulli functional closed-form values") {
  ReferenceMeasure q = ReferenceMeasure::bernoulli(0.5);
  CHECK(entropy_functional(q, Constraint::Generalized, 0.5, 0.25).value ==
        doctest::Approx(0.22314355131420976).epsilon(1e-12));
  CHECK(entropy_functional(q, Constraint::Classical, 0.5, 0.25).value ==
        doctest::Approx(0.069336464195073910).epsilon(1e-12));
  CHECK(entropy_functional(q, Constraint::Classical, 2.0, 0.3).value ==
        doctest::Approx(0.14842000511827328).epsilon(1e-12));
  CHECK(entropy_functional(q, Constraint::Generalized, 2.0, 0.3).value ==
        doctest::Approx(0.042638675461689296).epsilon(1e-12));
}

TEST_CASE("optimal distribution and escort transform") {
  ReferenceMeasure q = ReferenceMeasure::bernoulli(0.5);
  MaxEntDistribution p =
      maxent_distribution(q, Constraint::Generalized, 0.5, 0.25);
  CHECK(density(p, 1.0) == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(density(p, 0.0) == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(classical_mean(p) == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(generalized_mean(p, 0.5) == doctest::Approx(0.25).epsilon(1e-9));

  MaxEntDistribution e = escort_of(p, 0.5);
  CHECK(density(e, 1.0) == doctest::Approx(0.25).epsilon(1e-9));
  MaxEntDistribution back = escort_of(e, 2.0);
  CHECK(density(back, 1.0) == doctest::Approx(density(p, 1.0)).epsilon(1e-10));
}

TEST_CASE("divergences over mass vectors") {
  std::vector<double> p = {0.75, 0.25}, q = {0.5, 0.5};
  CHECK(renyi_divergence_masses(p, q, 2.0) ==
        doctest::Approx(std::log(1.25)).epsilon(1e-12));
  // alpha -> 1 gives the Kullback form.
  double kl = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
  CHECK(renyi_divergence_masses(p, q, 1.0) == doctest::Approx(kl).epsilon(1e-12));
  CHECK(renyi_divergence_masses(q, q, 2.0) == doctest::Approx(0.0));
  // Mass where q vanishes is fatal for alpha > 1, ignored below 1.
  std::vector<double> q0 = {1.0, 0.0};
  CHECK_THROWS_AS(renyi_divergence_masses(p, q0, 2.0),
                  AbsoluteContinuityViolated);
  CHECK(std::isfinite(renyi_divergence_masses(p, q0, 0.5)));
}

TEST_CASE("divergence to the reference equals the functional value") {
  ReferenceMeasure q = ReferenceMeasure::bernoulli(0.5);
  MaxEntDistribution p =
      maxent_distribution(q, Constraint::Generalized, 2.0, 0.3);
  CHECK(renyi_divergence_to_ref(p, 2.0) ==
        doctest::Approx(0.042638675461689296).epsilon(1e-10));

  ReferenceMeasure ex = ReferenceMeasure::exponential(1.0);
  FunctionalPoint pt = entropy_functional(ex, Constraint::Classical, 2.0, 1.4);
  MaxEntDistribution pc =
      maxent_distribution(ex, Constraint::Classical, 2.0, 1.4);
  CHECK(renyi_divergence_to_ref(pc, 2.0) ==
        doctest::Approx(pt.value).epsilon(1e-8));
}

TEST_CASE("log expectation of power products") {
  ReferenceMeasure ex = ReferenceMeasure::exponential(1.0);
  LogVal v = log_expect_product(ex, {{2.0, 0.5, 0.5}});
  CHECK(v.sign == 1.0);
  CHECK(std::exp(v.log_abs) == doctest::Approx(1.8125).epsilon(1e-10));

  // Two factors multiply pointwise; with one exponent zero this reduces to
  // the single-factor case on the intersected domain.
  LogVal w = log_expect_product(ex, {{2.0, 0.5, 0.5}, {0.0, 0.3, 1.0}});
  CHECK(std::exp(w.log_abs) == doctest::Approx(1.8125).epsilon(1e-9));
}

TEST_CASE("duality between the two constraint families") {
  struct Inst {
    ReferenceMeasure q;
    double alpha, m;
  };
  const Inst insts[] = {
      {ReferenceMeasure::uniform(0.0, 1.0), 2.0, 0.35},
      {ReferenceMeasure::exponential(1.0), 0.5, 1.6},
      {ReferenceMeasure::poisson(3.0), 2.0, 2.2},
      {ReferenceMeasure::bernoulli(0.5), 0.5, 0.7},
  };
  for (const Inst& in : insts) {
    CAPTURE(in.alpha);
    auto [fg, fc] = duality_check(in.q, in.alpha, in.m);
    CHECK(fg == doctest::Approx(fc).epsilon(1e-8));
  }
}

TEST_CASE("zero escape above the reference mean") {
  ReferenceMeasure p = ReferenceMeasure::poisson(3.0);
  FunctionalPoint pt = entropy_functional(p, Constraint::Classical, 0.5, 4.0);
  CHECK(pt.value == 0.0);
  CHECK(pt.regime_flag == kRegimeZeroEscape);
  CHECK(pt.converged);

  pt = entropy_functional(p, Constraint::Generalized, 2.0, 3.5);
  CHECK(pt.regime_flag == kRegimeZeroEscape);

  ReferenceMeasure ex = ReferenceMeasure::exponential(1.0);
  pt = entropy_functional(ex, Constraint::Generalized, 2.0, 1.5);
  CHECK(pt.value == 0.0);
  CHECK(pt.regime_flag == kRegimeZeroEscape);

  // Bounded supports never escape.
  ReferenceMeasure u = ReferenceMeasure::uniform(0.0, 1.0);
  pt = entropy_functional(u, Constraint::Classical, 0.5, 0.9);
  CHECK(pt.regime_flag == kRegimeInterior);
  CHECK(pt.value > 0.0);
}

TEST_CASE("functional curves carry diagnostics instead of aborting") {
  ReferenceMeasure u = ReferenceMeasure::uniform(0.0, 1.0);
  // The last grid point lies outside the support hull; the curve must flag
  // it, not die.
  std::vector<double> grid = {0.3, 0.6, 1.5};
  FunctionalCurve fc = functional_curve(u, Constraint::Classical, 0.5, grid);
  REQUIRE(fc.points.size() == 3);
  CHECK(std::isfinite(fc.points[0].value));
  CHECK(std::isfinite(fc.points[1].value));
  CHECK(std::isnan(fc.points[2].value));
  CHECK_FALSE(fc.points[2].diagnostic.empty());

  // Above the reference mean the escaping regimes fill in exact zeros.
  ReferenceMeasure ex = ReferenceMeasure::exponential(1.0);
  FunctionalCurve esc =
      functional_curve(ex, Constraint::Classical, 0.5, {0.5, 2.5});
  CHECK(std::isfinite(esc.points[0].value));
  CHECK(esc.points[1].value == 0.0);
  CHECK(esc.points[1].regime_flag == kRegimeZeroEscape);
}

TEST_CASE("default grid pins the reference mean") {
  for (const ReferenceMeasure& q :
       {ReferenceMeasure::uniform(0.0, 1.0), ReferenceMeasure::exponential(1.0),
        ReferenceMeasure::bernoulli(0.5), ReferenceMeasure::poisson(3.0)}) {
    std::vector<double> g = default_m_grid(q, 21);
    REQUIRE(g.size() == 21);
    bool pinned = false;
    for (double m : g) {
      if (m == q.mean_q()) pinned = true;
      CHECK(std::isfinite(m));
    }
    CHECK(pinned);
  }
}

TEST_CASE("object-space divergence values") {
  ReferenceMeasure q = ReferenceMeasure::bernoulli(0.5);
  CHECK(bregman_divergence(q, 2.0, 0.6, 0.4) ==
        doctest::Approx(0.040413705408140547).epsilon(1e-10));
  CHECK(std::fabs(bregman_divergence(q, 2.0, 0.4, 0.4)) < 1e-12);

  MaxEntDistribution p2 =
      maxent_distribution(q, Constraint::Generalized, 2.0, 0.6);
  MaxEntDistribution p1 =
      maxent_distribution(q, Constraint::Generalized, 2.0, 0.4);
  CHECK(renyi_divergence(p2, p1, 2.0) ==
        doctest::Approx(0.040413705408140547).epsilon(1e-9));

  CHECK_THROWS_AS(bregman_divergence(q, 1.0, 0.6, 0.4), ConfigError);
}

TEST_CASE("envelope derivative matches finite differences") {
  ReferenceMeasure q = ReferenceMeasure::bernoulli(0.5);
  double m = 0.45, h = 1e-5;
  double d = bregman_derivative(q, 2.0, m);
  double fp = entropy_functional(q, Constraint::Generalized, 2.0, m + h).value;
  double fm = entropy_functional(q, Constraint::Generalized, 2.0, m - h).value;
  CHECK(d == doctest::Approx((fp - fm) / (2.0 * h)).epsilon(1e-5));
}

TEST_CASE("cramer transform closed cases") {
  CramerResult r =
      cramer_transform(ReferenceMeasure::uniform(0.0, 1.0), 0.75);
  CHECK(r.value == doctest::Approx(0.40863882040277116).epsilon(1e-10));
  CHECK(r.tilt == doctest::Approx(3.5935119694474261).epsilon(1e-7));

  r = cramer_transform(ReferenceMeasure::exponential(1.0), 0.5);
  CHECK(r.value == doctest::Approx(0.19314718055994531).epsilon(1e-10));
  CHECK(r.tilt == doctest::Approx(-1.0).epsilon(1e-7));

  r = cramer_transform(ReferenceMeasure::bernoulli(0.5), 0.25);
  CHECK(r.value == doctest::Approx(0.13081203594113696).epsilon(1e-10));

  r = cramer_transform(ReferenceMeasure::poisson(3.0), 4.0);
  CHECK(r.value == doctest::Approx(0.15072828980712371).epsilon(1e-10));
  CHECK(r.tilt == doctest::Approx(0.28768207245178093).epsilon(1e-7));

  r = cramer_transform(ReferenceMeasure::poisson(3.0), 1.15);
  CHECK(r.value == doctest::Approx(0.74732210176310636).epsilon(1e-10));
}

TEST_CASE("alpha one limits") {
  ReferenceMeasure ex = ReferenceMeasure::exponential(1.0);
  Alpha1Value v = limit_alpha1(ex, Constraint::Classical, 0.5);
  CHECK(v.value == doctest::Approx(0.19314718055994531).epsilon(1e-14));
  CHECK(v.regime_flag == kRegimeLimit);

  // One-sided branches surface the escape restriction above the mean.
  v = limit_alpha1(ex, Constraint::Classical, 1.5, Alpha1Branch::FromBelow);
  CHECK(v.value == 0.0);
  CHECK(v.regime_flag == kRegimeZeroEscape);
  v = limit_alpha1(ex, Constraint::Generalized, 1.5, Alpha1Branch::FromAbove);
  CHECK(v.value == 0.0);
  v = limit_alpha1(ex, Constraint::Classical, 1.5, Alpha1Branch::Principal);
  CHECK(v.value == doctest::Approx(0.5 - std::log(1.5)).epsilon(1e-12));

  ReferenceMeasure p = ReferenceMeasure::poisson(3.0);
  v = limit_alpha1(p, Constraint::Classical, 4.0, Alpha1Branch::FromBelow);
  CHECK(v.value == 0.0);
  CHECK(v.regime_flag == kRegimeZeroEscape);
  v = limit_alpha1(p, Constraint::Classical, 4.0);
  CHECK(v.value == doctest::Approx(0.15072828980712371).epsilon(1e-12));

  ReferenceMeasure b = ReferenceMeasure::bernoulli(0.5);
  v = limit_alpha1(b, Constraint::Generalized, 0.25);
  CHECK(v.value == doctest::Approx(0.13081203594113696).epsilon(1e-12));

  // The functional itself routes alpha = 1 through the limit.
  FunctionalPoint pt = entropy_functional(ex, Constraint::Classical, 1.0, 0.5);
  CHECK(pt.value == doctest::Approx(0.19314718055994531).epsilon(1e-14));
  CHECK(pt.regime_flag == kRegimeLimit);

  CHECK_THROWS_AS(limit_alpha1(ex, Constraint::Classical, -0.5),
                  InfeasibleMean);
}

TEST_CASE("near-one orders approach the exponential tilt") {
  // classical, alpha -> 1: the optimizer approaches e^{t(x-m)} Q / Z with
  // t = beta - 1/m.
  ReferenceMeasure ex = ReferenceMeasure::exponential(1.0);
  double alpha = 0.999, m = 0.5;
  MaxEntDistribution d =
      maxent_distribution(ex, Constraint::Classical, alpha, m);
  // Tilted density: rate 2 exponential.
  for (double x : {0.2, 0.5, 1.0}) {
    double want = 2.0 * std::exp(-2.0 * x);
    CHECK(density(d, x) == doctest::Approx(want).epsilon(5e-3));
  }
  FunctionalPoint pt = entropy_functional(ex, Constraint::Classical, alpha, m);
  CHECK(pt.value ==
        doctest::Approx(0.19314718055994531).epsilon(5e-3));
}

TEST_CASE("thread budget env override") {
  setenv("RENYI_MAXENT_THREADS", "3", 1);
  CHECK(thread_budget() == 3);
  setenv("RENYI_MAXENT_THREADS", "not-a-number", 1);
  CHECK(thread_budget() >= 1);
  unsetenv("RENYI_MAXENT_THREADS");
  CHECK(thread_budget() >= 1);
}
