#include <cmath>
#include <doctest.h>
#include <string>

#include "renyi/errors.hpp"
#include "renyi/measures.hpp"

using namespace renyi;

namespace {
std::string fixture(const char* name) {
  return std::string(RENYI_DATA_DIR) + "/" + name;
}
}  // namespace

TEST_CASE("builtin parameter validation") {
  CHECK_THROWS_AS(ReferenceMeasure::uniform(1.0, 0.0).validate(),
                  InvalidMeasure);
  CHECK_THROWS_AS(ReferenceMeasure::exponential(0.0).validate(),
                  InvalidMeasure);
  CHECK_THROWS_AS(ReferenceMeasure::exponential(-2.0).validate(),
                  InvalidMeasure);
  CHECK_THROWS_AS(ReferenceMeasure::bernoulli(0.0).validate(), InvalidMeasure);
  CHECK_THROWS_AS(ReferenceMeasure::bernoulli(1.0).validate(), InvalidMeasure);
  CHECK_THROWS_AS(ReferenceMeasure::poisson(-1.0).validate(), InvalidMeasure);
  CHECK_NOTHROW(ReferenceMeasure::uniform(-2.0, 3.0).validate());
}

TEST_CASE("reference means") {
  CHECK(ReferenceMeasure::uniform(0.0, 1.0).mean_q() == doctest::Approx(0.5));
  CHECK(ReferenceMeasure::uniform(-2.0, 4.0).mean_q() == doctest::Approx(1.0));
  CHECK(ReferenceMeasure::exponential(2.0).mean_q() == doctest::Approx(0.5));
  // mass beta at zero, 1 - beta at one
  CHECK(ReferenceMeasure::bernoulli(0.3).mean_q() == doctest::Approx(0.7));
  CHECK(ReferenceMeasure::poisson(3.0).mean_q() == doctest::Approx(3.0));
}

TEST_CASE("log mass and log density") {
  ReferenceMeasure u = ReferenceMeasure::uniform(0.0, 2.0);
  CHECK(u.log_q(1.0) == doctest::Approx(-std::log(2.0)));
  CHECK(u.log_q(3.0) == -std::numeric_limits<double>::infinity());

  ReferenceMeasure b = ReferenceMeasure::bernoulli(0.25);
  CHECK(b.log_q(0.0) == doctest::Approx(std::log(0.25)));
  CHECK(b.log_q(1.0) == doctest::Approx(std::log(0.75)));
  CHECK(b.log_q(0.5) == -std::numeric_limits<double>::infinity());

  ReferenceMeasure p = ReferenceMeasure::poisson(3.0);
  CHECK(p.log_q(2.0) ==
        doctest::Approx(2.0 * std::log(3.0) - 3.0 - std::log(2.0)));
}

TEST_CASE("support descriptors") {
  SupportDesc s = ReferenceMeasure::uniform(-1.0, 2.0).support();
  CHECK(s.lower == -1.0);
  CHECK(s.upper == 2.0);
  CHECK_FALSE(s.integer_lattice);

  s = ReferenceMeasure::exponential(1.0).support();
  CHECK(s.lower == 0.0);
  CHECK(std::isinf(s.upper));

  s = ReferenceMeasure::poisson(2.0).support();
  CHECK(s.integer_lattice);
  CHECK(std::isinf(s.upper));
}

TEST_CASE("tabulated CSV loading") {
  ReferenceMeasure t = load_tabulated_csv(fixture("tab_small.csv"));
  CHECK(t.kind == MeasureKind::TabulatedDiscrete);
  REQUIRE(t.atom_xs().size() == 3);
  CHECK(t.mean_q() == doctest::Approx(0.25 + 2.0 * 0.5));
  auto masses = t.atom_masses();
  double sum = 0.0;
  for (double w : masses) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

  // A near-one total renormalizes; a clearly wrong one is rejected.
  CHECK_NOTHROW(load_tabulated_csv(fixture("tab_renorm.csv")));
  ReferenceMeasure r = load_tabulated_csv(fixture("tab_renorm.csv"));
  sum = 0.0;
  for (double w : r.atom_masses()) sum += w;
  CHECK(std::fabs(sum - 1.0) < 1e-14);

  CHECK_THROWS_AS(load_tabulated_csv(fixture("tab_badsum.csv")),
                  InvalidMeasure);
  CHECK_THROWS_AS(load_tabulated_csv(fixture("tab_unsorted.csv")),
                  InvalidMeasure);
  CHECK_THROWS_AS(load_tabulated_csv(fixture("no_such_file.csv")), Error);
}

TEST_CASE("gridded CSV loading") {
  ReferenceMeasure g = load_gridded_csv(fixture("grid_small.csv"));
  CHECK(g.kind == MeasureKind::GriddedContinuous);
  CHECK_FALSE(g.is_discrete());
  // Piecewise-linear density 0.5 -> 0.75 -> 0 over [0, 2].
  CHECK(std::exp(g.log_q(0.5)) == doctest::Approx(0.625).epsilon(1e-9));
  CHECK(g.log_q(2.5) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(load_gridded_csv(fixture("grid_badsum.csv")),
                  InvalidMeasure);
}

TEST_CASE("describe names the kind") {
  CHECK(ReferenceMeasure::poisson(3.0).describe().find("poisson") !=
        std::string::npos);
  CHECK(ReferenceMeasure::uniform(0.0, 1.0).describe().find("uniform") !=
        std::string::npos);
}
