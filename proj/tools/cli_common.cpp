#include "cli_common.hpp"

#include <cstdlib>
#include <sstream>

#include "renyi/errors.hpp"

namespace cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, sep)) out.push_back(tok);
  return out;
}

double to_real(const std::string& s) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || (end && *end != '\0')) {
    throw renyi::ConfigError("not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

renyi::ReferenceMeasure parse_measure(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw renyi::ConfigError("measure spec needs 'kind:params': " + spec);
  }
  std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  if (kind == "uniform") {
    auto ab = split(rest, ',');
    if (ab.size() != 2) throw renyi::ConfigError("uniform needs a,b");
    return renyi::ReferenceMeasure::uniform(to_real(ab[0]), to_real(ab[1]));
  }
  if (kind == "exponential") {
    return renyi::ReferenceMeasure::exponential(to_real(rest));
  }
  if (kind == "bernoulli") {
    return renyi::ReferenceMeasure::bernoulli(to_real(rest));
  }
  if (kind == "poisson") {
    return renyi::ReferenceMeasure::poisson(to_real(rest));
  }
  if (kind == "tabulated") {
    return renyi::load_tabulated_csv(rest);
  }
  if (kind == "gridded") {
    return renyi::load_gridded_csv(rest);
  }
  throw renyi::ConfigError("unknown measure kind '" + kind + "'");
}

std::vector<double> parse_grid(const std::string& spec) {
  auto parts = split(spec, ':');
  if (parts.size() != 3) {
    throw renyi::ConfigError("grid spec needs lo:hi:n: " + spec);
  }
  double lo = to_real(parts[0]);
  double hi = to_real(parts[1]);
  long n = std::strtol(parts[2].c_str(), nullptr, 10);
  if (n < 2 || n > 1000000) {
    throw renyi::ConfigError("grid point count out of range: " + parts[2]);
  }
  if (!(hi > lo)) throw renyi::ConfigError("grid needs hi > lo");
  std::vector<double> g(n);
  for (long i = 0; i < n; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  return g;
}

std::vector<double> parse_reals(const std::string& spec) {
  std::vector<double> out;
  for (const std::string& tok : split(spec, ',')) {
    if (tok.empty()) continue;
    out.push_back(to_real(tok));
  }
  if (out.empty()) throw renyi::ConfigError("empty number list: " + spec);
  return out;
}

renyi::Constraint parse_constraint(const std::string& s) {
  if (s == "C" || s == "c" || s == "classical") {
    return renyi::Constraint::Classical;
  }
  if (s == "G" || s == "g" || s == "generalized") {
    return renyi::Constraint::Generalized;
  }
  throw renyi::ConfigError("constraint must be C or G, got '" + s + "'");
}

std::string constraint_name(renyi::Constraint c) {
  return c == renyi::Constraint::Classical ? "C" : "G";
}

}  // namespace cli
