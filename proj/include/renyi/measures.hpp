#pragma once

#include <string>
#include <vector>

namespace renyi {

enum class MeasureKind {
  Uniform,
  Exponential,
  Bernoulli,
  Poisson,
  TabulatedDiscrete,
  GriddedContinuous,
};

// Support of a reference measure, with infinities allowed at either end.
struct SupportDesc {
  double lower;
  double upper;
  bool integer_lattice;
};

// A reference probability measure q. Continuous kinds carry a density,
// discrete kinds a mass function. The Bernoulli convention puts mass beta at
// x = 0 and mass 1 - beta at x = 1, so its mean is 1 - beta.
struct ReferenceMeasure {
  MeasureKind kind = MeasureKind::Uniform;
  double a = 0.0, b = 1.0;  // Uniform endpoints
  double beta = 1.0;        // Exponential rate, or Bernoulli mass at zero
  double mu = 1.0;          // Poisson mean
  std::vector<double> xs;   // tabulated atoms or grid abscissae, increasing
  std::vector<double> ws;   // masses (tabulated) or densities (gridded)

  static ReferenceMeasure uniform(double a, double b);
  static ReferenceMeasure exponential(double beta);
  static ReferenceMeasure bernoulli(double beta);
  static ReferenceMeasure poisson(double mu);
  static ReferenceMeasure tabulated(std::vector<double> xs, std::vector<double> masses);
  static ReferenceMeasure gridded(std::vector<double> xs, std::vector<double> densities);

  void validate() const;  // throws InvalidMeasure
  bool is_discrete() const;
  double mean_q() const;
  SupportDesc support() const;

  // log mass at an atom (discrete) or log density (continuous); -inf away
  // from the support. Gridded densities interpolate linearly between knots.
  double log_q(double x) const;

  // Atom lists for the bounded discrete kinds; throws for the others.
  const std::vector<double>& atom_xs() const;
  std::vector<double> atom_masses() const;

  std::string describe() const;
};

// Readers for the "x,value" CSV layout. A non-numeric first line is treated
// as a header. Totals within 1e-6 of one are renormalized exactly; anything
// further off is rejected.
ReferenceMeasure load_tabulated_csv(const std::string& path);
ReferenceMeasure load_gridded_csv(const std::string& path);

}  // namespace renyi
