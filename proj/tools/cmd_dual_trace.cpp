#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "cli_common.hpp"
#include "renyi/errors.hpp"
#include "renyi/solver.hpp"
#include "renyi/verify.hpp"

namespace cli {

int run_dual_trace(const TraceOpts& o) {
  renyi::ReferenceMeasure q;
  renyi::Constraint c;
  double alpha;
  std::vector<double> grid;
  std::vector<renyi::GammaSegment> segs;
  try {
    q = parse_measure(o.common.measure);
    c = parse_constraint(o.common.constraint);
    auto alphas = parse_reals(o.common.alpha);
    if (alphas.size() != 1) {
      throw renyi::ConfigError("dual-trace takes a single alpha");
    }
    alpha = alphas[0];
    grid = parse_grid(o.gamma_grid);
    segs = renyi::enumerate_segments(q, c, alpha, o.m, o.common.kmax);
  } catch (const renyi::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::ostream* outp = &std::cout;
  std::ofstream file;
  if (!o.common.out.empty()) {
    file.open(o.common.out);
    if (!file) {
      std::cerr << "config error: cannot open " << o.common.out << "\n";
      return kExitConfig;
    }
    outp = &file;
  }
  std::ostream& out = *outp;

  auto segment_of = [&](double g) -> int {
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (g > segs[i].lo && g < segs[i].hi) return static_cast<int>(i);
    }
    return -1;
  };

  bool json = o.common.format == "json";
  nlohmann::json rows = nlohmann::json::array();
  if (!json) out << "gamma,dual,segment_id,infinite\n";
  for (double g : grid) {
    double d = renyi::dual_value(q, c, alpha, o.m, g);
    bool inf = !std::isfinite(d);
    int sid = segment_of(g);
    if (json) {
      rows.push_back({{"gamma", g},
                      {"dual", inf ? nlohmann::json() : nlohmann::json(d)},
                      {"segment_id", sid},
                      {"infinite", inf}});
    } else {
      out << renyi::format_sig17(g) << ","
          << (inf ? std::string("-inf") : renyi::format_sig17(d)) << ","
          << sid << "," << (inf ? 1 : 0) << "\n";
    }
  }
  if (json) out << rows.dump(2) << "\n";
  return kExitOk;
}

}  // namespace cli
