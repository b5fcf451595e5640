#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "cli_common.hpp"
#include "renyi/errors.hpp"
#include "renyi/functionals.hpp"
#include "renyi/verify.hpp"

namespace cli {

int run_curve(const CurveOpts& o) {
  renyi::ReferenceMeasure q;
  renyi::Constraint c;
  std::vector<double> alphas;
  std::vector<double> grid;
  try {
    q = parse_measure(o.common.measure);
    c = parse_constraint(o.common.constraint);
    alphas = parse_reals(o.common.alpha);
    grid = o.m_grid.empty() ? renyi::default_m_grid(q, o.grid_points)
                            : parse_grid(o.m_grid);
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

  int ok_points = 0;
  nlohmann::json rows = nlohmann::json::array();
  bool json = o.common.format == "json";
  if (!json) out << "m,alpha,constraint,F,gamma_star,regime_flag\n";
  for (double alpha : alphas) {
    renyi::FunctionalCurve fc =
        renyi::functional_curve(q, c, alpha, grid, o.common.kmax);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const renyi::FunctionalPoint& pt = fc.points[i];
      if (std::isnan(pt.value)) {
        std::cerr << "point m=" << renyi::format_sig17(grid[i])
                  << " alpha=" << renyi::format_sig17(alpha)
                  << " failed: " << pt.diagnostic << "\n";
      } else {
        ++ok_points;
      }
      if (json) {
        rows.push_back({{"m", pt.m},
                        {"alpha", alpha},
                        {"constraint", constraint_name(c)},
                        {"F", pt.value},
                        {"gamma_star", pt.gamma_star},
                        {"regime_flag", pt.regime_flag}});
      } else {
        out << renyi::format_sig17(pt.m) << "," << renyi::format_sig17(alpha)
            << "," << constraint_name(c) << ","
            << renyi::format_sig17(pt.value) << ","
            << renyi::format_sig17(pt.gamma_star) << "," << pt.regime_flag
            << "\n";
      }
    }
  }
  if (json) out << rows.dump(2) << "\n";
  if (ok_points == 0) {
    std::cerr << "solver failure: every grid point failed\n";
    return kExitSolver;
  }
  return kExitOk;
}

}  // namespace cli
