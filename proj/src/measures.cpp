#include "renyi/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "renyi/accum.hpp"
#include "renyi/errors.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_integral(double x) { return x == std::floor(x); }

double trapezoid_total(const std::vector<double>& xs, const std::vector<double>& ds) {
  KahanSum s;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    s.add(0.5 * (xs[i + 1] - xs[i]) * (ds[i] + ds[i + 1]));
  return s.value();
}

}  // namespace

ReferenceMeasure ReferenceMeasure::uniform(double a, double b) {
  ReferenceMeasure m;
  m.kind = MeasureKind::Uniform;
  m.a = a;
  m.b = b;
  m.validate();
  return m;
}

ReferenceMeasure ReferenceMeasure::exponential(double beta) {
  ReferenceMeasure m;
  m.kind = MeasureKind::Exponential;
  m.beta = beta;
  m.validate();
  return m;
}

ReferenceMeasure ReferenceMeasure::bernoulli(double beta) {
  ReferenceMeasure m;
  m.kind = MeasureKind::Bernoulli;
  m.beta = beta;
  m.validate();
  return m;
}

ReferenceMeasure ReferenceMeasure::poisson(double mu) {
  ReferenceMeasure m;
  m.kind = MeasureKind::Poisson;
  m.mu = mu;
  m.validate();
  return m;
}

ReferenceMeasure ReferenceMeasure::tabulated(std::vector<double> xs,
                                             std::vector<double> masses) {
  ReferenceMeasure m;
  m.kind = MeasureKind::TabulatedDiscrete;
  m.xs = std::move(xs);
  m.ws = std::move(masses);
  double total = 0.0;
  for (double w : m.ws) total += w;
  if (std::fabs(total - 1.0) > 1e-6)
    throw InvalidMeasure("tabulated masses sum to " + std::to_string(total));
  for (double& w : m.ws) w /= total;
  m.validate();
  return m;
}

ReferenceMeasure ReferenceMeasure::gridded(std::vector<double> xs,
                                           std::vector<double> densities) {
  ReferenceMeasure m;
  m.kind = MeasureKind::GriddedContinuous;
  m.xs = std::move(xs);
  m.ws = std::move(densities);
  if (m.xs.size() < 2) throw InvalidMeasure("gridded measure needs at least two knots");
  double total = trapezoid_total(m.xs, m.ws);
  if (std::fabs(total - 1.0) > 1e-6)
    throw InvalidMeasure("gridded density integrates to " + std::to_string(total));
  for (double& w : m.ws) w /= total;
  m.validate();
  return m;
}

void ReferenceMeasure::validate() const {
  switch (kind) {
    case MeasureKind::Uniform:
      if (!(a < b)) throw InvalidMeasure("uniform requires a < b");
      if (!std::isfinite(a) || !std::isfinite(b))
        throw InvalidMeasure("uniform endpoints must be finite");
      return;
    case MeasureKind::Exponential:
      if (!(beta > 0.0) || !std::isfinite(beta))
        throw InvalidMeasure("exponential requires beta > 0");
      return;
    case MeasureKind::Bernoulli:
      if (!(beta > 0.0 && beta < 1.0))
        throw InvalidMeasure("bernoulli requires beta in (0, 1)");
      return;
    case MeasureKind::Poisson:
      if (!(mu > 0.0) || !std::isfinite(mu))
        throw InvalidMeasure("poisson requires mu > 0");
      return;
    case MeasureKind::TabulatedDiscrete: {
      if (xs.size() != ws.size() || xs.empty())
        throw InvalidMeasure("tabulated measure needs matching nonempty columns");
      KahanSum total;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i])) throw InvalidMeasure("tabulated atom not finite");
        if (i > 0 && !(xs[i] > xs[i - 1]))
          throw InvalidMeasure("tabulated atoms must be strictly increasing");
        if (!(ws[i] > 0.0)) throw InvalidMeasure("tabulated masses must be positive");
        total.add(ws[i]);
      }
      if (std::fabs(total.value() - 1.0) > 1e-12)
        throw InvalidMeasure("tabulated masses must sum to one");
      return;
    }
    case MeasureKind::GriddedContinuous: {
      if (xs.size() != ws.size() || xs.size() < 2)
        throw InvalidMeasure("gridded measure needs at least two knots");
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i])) throw InvalidMeasure("grid knot not finite");
        if (i > 0 && !(xs[i] > xs[i - 1]))
          throw InvalidMeasure("grid knots must be strictly increasing");
        if (!(ws[i] >= 0.0)) throw InvalidMeasure("grid densities must be nonnegative");
      }
      if (std::fabs(trapezoid_total(xs, ws) - 1.0) > 1e-12)
        throw InvalidMeasure("gridded density must integrate to one");
      return;
    }
  }
  throw InvalidMeasure("unknown measure kind");
}

bool ReferenceMeasure::is_discrete() const {
  return kind == MeasureKind::Bernoulli || kind == MeasureKind::Poisson ||
         kind == MeasureKind::TabulatedDiscrete;
}

double ReferenceMeasure::mean_q() const {
  switch (kind) {
    case MeasureKind::Uniform: return 0.5 * (a + b);
    case MeasureKind::Exponential: return 1.0 / beta;
    case MeasureKind::Bernoulli: return 1.0 - beta;
    case MeasureKind::Poisson: return mu;
    case MeasureKind::TabulatedDiscrete: {
      KahanSum s;
      for (std::size_t i = 0; i < xs.size(); ++i) s.add(xs[i] * ws[i]);
      return s.value();
    }
    case MeasureKind::GriddedContinuous: {
      // Exact first moment of the piecewise-linear density.
      KahanSum s;
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        double h = xs[i + 1] - xs[i];
        s.add(h * (xs[i] * (2.0 * ws[i] + ws[i + 1]) +
                   xs[i + 1] * (ws[i] + 2.0 * ws[i + 1])) / 6.0);
      }
      return s.value();
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

SupportDesc ReferenceMeasure::support() const {
  switch (kind) {
    case MeasureKind::Uniform: return {a, b, false};
    case MeasureKind::Exponential: return {0.0, kInf, false};
    case MeasureKind::Bernoulli: return {0.0, 1.0, true};
    case MeasureKind::Poisson: return {0.0, kInf, true};
    case MeasureKind::TabulatedDiscrete: {
      bool lattice = true;
      for (double x : xs) lattice = lattice && is_integral(x);
      return {xs.front(), xs.back(), lattice};
    }
    case MeasureKind::GriddedContinuous: return {xs.front(), xs.back(), false};
  }
  return {0.0, 0.0, false};
}

double ReferenceMeasure::log_q(double x) const {
  switch (kind) {
    case MeasureKind::Uniform:
      return (x >= a && x <= b) ? -std::log(b - a) : -kInf;
    case MeasureKind::Exponential:
      return (x >= 0.0) ? std::log(beta) - beta * x : -kInf;
    case MeasureKind::Bernoulli:
      if (x == 0.0) return std::log(beta);
      if (x == 1.0) return std::log1p(-beta);
      return -kInf;
    case MeasureKind::Poisson: {
      if (x < 0.0 || !is_integral(x)) return -kInf;
      return -mu + x * std::log(mu) - std::lgamma(x + 1.0);
    }
    case MeasureKind::TabulatedDiscrete: {
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] == x) return std::log(ws[i]);
      return -kInf;
    }
    case MeasureKind::GriddedContinuous: {
      if (x < xs.front() || x > xs.back()) return -kInf;
      auto it = std::lower_bound(xs.begin(), xs.end(), x);
      std::size_t i = (it == xs.begin()) ? 0 : (it - xs.begin() - 1);
      if (i + 1 >= xs.size()) i = xs.size() - 2;
      double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
      double d = (1.0 - t) * ws[i] + t * ws[i + 1];
      return d > 0.0 ? std::log(d) : -kInf;
    }
  }
  return -kInf;
}

const std::vector<double>& ReferenceMeasure::atom_xs() const {
  static const std::vector<double> bernoulli_xs{0.0, 1.0};
  switch (kind) {
    case MeasureKind::Bernoulli: return bernoulli_xs;
    case MeasureKind::TabulatedDiscrete: return xs;
    default:
      throw InvalidMeasure("atom list requested for a measure without a finite atom list");
  }
}

std::vector<double> ReferenceMeasure::atom_masses() const {
  switch (kind) {
    case MeasureKind::Bernoulli: return {beta, 1.0 - beta};
    case MeasureKind::TabulatedDiscrete: return ws;
    default:
      throw InvalidMeasure("atom list requested for a measure without a finite atom list");
  }
}

std::string ReferenceMeasure::describe() const {
  std::ostringstream os;
  switch (kind) {
    case MeasureKind::Uniform: os << "uniform(" << a << ", " << b << ")"; break;
    case MeasureKind::Exponential: os << "exponential(beta=" << beta << ")"; break;
    case MeasureKind::Bernoulli: os << "bernoulli(beta=" << beta << ")"; break;
    case MeasureKind::Poisson: os << "poisson(mu=" << mu << ")"; break;
    case MeasureKind::TabulatedDiscrete:
      os << "tabulated(" << xs.size() << " atoms)";
      break;
    case MeasureKind::GriddedContinuous:
      os << "gridded(" << xs.size() << " knots)";
      break;
  }
  return os.str();
}

namespace {

std::pair<std::vector<double>, std::vector<double>> read_xy_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidMeasure("cannot open " + path);
  std::vector<double> xs, ys;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string xcell, ycell;
    if (!std::getline(ls, xcell, ',') || !std::getline(ls, ycell)) {
      if (first) { first = false; continue; }
      throw InvalidMeasure("bad row in " + path + ": " + line);
    }
    char* endp = nullptr;
    double x = std::strtod(xcell.c_str(), &endp);
    if (endp == xcell.c_str()) {
      if (first) { first = false; continue; }  // header row
      throw InvalidMeasure("bad number in " + path + ": " + line);
    }
    double y = std::strtod(ycell.c_str(), &endp);
    if (endp == ycell.c_str())
      throw InvalidMeasure("bad number in " + path + ": " + line);
    xs.push_back(x);
    ys.push_back(y);
    first = false;
  }
  if (xs.empty()) throw InvalidMeasure("no data rows in " + path);
  return {xs, ys};
}

}  // namespace

ReferenceMeasure load_tabulated_csv(const std::string& path) {
  auto [xs, ys] = read_xy_csv(path);
  return ReferenceMeasure::tabulated(std::move(xs), std::move(ys));
}

ReferenceMeasure load_gridded_csv(const std::string& path) {
  auto [xs, ys] = read_xy_csv(path);
  return ReferenceMeasure::gridded(std::move(xs), std::move(ys));
}

}  // namespace renyi
