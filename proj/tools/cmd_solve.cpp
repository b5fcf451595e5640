#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "cli_common.hpp"
#include "renyi/errors.hpp"
#include "renyi/functionals.hpp"
#include "renyi/verify.hpp"

namespace cli {

namespace {

void write_density_table(const renyi::FunctionalPoint& pt,
                         const renyi::ReferenceMeasure& q,
                         renyi::Constraint c, double alpha,
                         const std::string& path, const std::string& grid_spec,
                         int kmax) {
  renyi::MaxEntDistribution d =
      renyi::maxent_distribution(q, c, alpha, pt.m, kmax);
  std::ofstream out(path);
  if (!out) throw renyi::ConfigError("cannot open " + path);
  out << "x,density\n";
  std::vector<double> xs;
  if (q.is_discrete()) {
    renyi::SupportDesc sup = q.support();
    double hi = std::isfinite(sup.upper)
                    ? sup.upper
                    : std::ceil(q.mean_q() + 10.0 * std::sqrt(q.mean_q()) + 10.0);
    if (q.kind == renyi::MeasureKind::TabulatedDiscrete) {
      xs = q.atom_xs();
    } else {
      for (double x = sup.lower; x <= hi; x += 1.0) xs.push_back(x);
    }
  } else {
    std::string spec = grid_spec;
    if (spec.empty()) {
      renyi::SupportDesc sup = q.support();
      double lo = sup.lower;
      double hi = std::isfinite(sup.upper) ? sup.upper
                                           : q.mean_q() * 8.0;
      spec = renyi::format_sig17(lo) + ":" + renyi::format_sig17(hi) + ":201";
    }
    xs = parse_grid(spec);
  }
  for (double x : xs) {
    out << renyi::format_sig17(x) << ","
        << renyi::format_sig17(renyi::density(d, x)) << "\n";
  }
}

}  // namespace

int run_solve(const SolveOpts& o) {
  renyi::ReferenceMeasure q;
  renyi::Constraint c;
  double alpha;
  try {
    q = parse_measure(o.common.measure);
    c = parse_constraint(o.common.constraint);
    auto alphas = parse_reals(o.common.alpha);
    if (alphas.size() != 1) {
      throw renyi::ConfigError("solve takes a single alpha");
    }
    alpha = alphas[0];
  } catch (const renyi::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  renyi::FunctionalPoint pt;
  std::vector<renyi::LocalMax> maxima;
  try {
    pt = renyi::entropy_functional(q, c, alpha, o.m, o.common.kmax);
    if (pt.regime_flag == renyi::kRegimeInterior && alpha != 1.0) {
      renyi::DualSolution sol =
          renyi::solve_constraint(q, c, alpha, o.m, o.common.kmax);
      maxima = sol.local_maxima;
    }
    if (!o.density_out.empty()) {
      write_density_table(pt, q, c, alpha, o.density_out, o.density_grid,
                          o.common.kmax);
    }
  } catch (const renyi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const renyi::Error& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
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

  if (o.common.format == "json") {
    nlohmann::json j;
    j["measure"] = q.describe();
    j["constraint"] = constraint_name(c);
    j["alpha"] = alpha;
    j["m"] = pt.m;
    j["F"] = pt.value;
    j["gamma_star"] = pt.gamma_star;
    j["nu"] = pt.nu;
    j["achieved_mean"] = pt.achieved_mean;
    j["regime_flag"] = pt.regime_flag;
    j["converged"] = pt.converged;
    nlohmann::json arr = nlohmann::json::array();
    for (const renyi::LocalMax& lm : maxima) {
      arr.push_back({{"gamma", lm.gamma}, {"value", lm.value}});
    }
    j["local_maxima"] = arr;
    out << j.dump(2) << "\n";
    return kExitOk;
  }

  out << "measure        " << q.describe() << "\n"
      << "constraint     " << constraint_name(c) << "\n"
      << "alpha          " << renyi::format_sig17(alpha) << "\n"
      << "m              " << renyi::format_sig17(pt.m) << "\n"
      << "F              " << renyi::format_sig17(pt.value) << "\n"
      << "gamma_star     " << renyi::format_sig17(pt.gamma_star) << "\n"
      << "nu             " << renyi::format_sig17(pt.nu) << "\n"
      << "achieved_mean  " << renyi::format_sig17(pt.achieved_mean) << "\n"
      << "regime_flag    " << pt.regime_flag << "\n"
      << "converged      " << (pt.converged ? "yes" : "no") << "\n";
  if (!maxima.empty()) {
    out << "local maxima (gamma, dual value):\n";
    for (const renyi::LocalMax& lm : maxima) {
      out << "  " << renyi::format_sig17(lm.gamma) << "  "
          << renyi::format_sig17(lm.value)
          << (lm.gamma == pt.gamma_star ? "  <- selected" : "") << "\n";
    }
  }
  return kExitOk;
}

}  // namespace cli
