#include <iostream>
#include <json.hpp>

#include "cli_common.hpp"
#include "renyi/verify.hpp"

namespace cli {

int run_check(const CheckOpts& o) {
  renyi::CheckOptions opts;
  opts.seed = o.seed;
  opts.tol_scale = o.tol_scale;
  opts.quick = o.quick;
  std::vector<renyi::CheckResult> rs = renyi::run_all_checks(opts);
  int failed = 0;
  if (o.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const renyi::CheckResult& r : rs) {
      if (!r.pass) ++failed;
      rows.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    std::cout << rows.dump(2) << "\n";
  } else {
    for (const renyi::CheckResult& r : rs) {
      if (!r.pass) ++failed;
      std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  "
                << r.detail << "\n";
    }
    std::cout << (failed == 0 ? "all checks passed"
                              : std::to_string(failed) + " check(s) failed")
              << "\n";
  }
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace cli
