// One PASS/FAIL line per acceptance criterion, then the supplementary checks.
// Exits nonzero when any numbered criterion fails.
#include <cstdio>
#include <iostream>
#include <map>
#include <thread>

#include "ellgen/verify.hpp"

namespace {

std::string describe(const ellgen::report& r) {
  std::string s = r.name;
  if (r.discrepancy) {
    const auto& d = *r.discrepancy;
    s += " [" + d.where + " at q=" + d.q.get_str() + " y=" + d.y.get_str();
    if (d.t) s += " t=" + std::to_string(*d.t);
    s += ": lhs " + d.lhs.get_str() + " rhs " + d.rhs.get_str() + "]";
  } else {
    s += " (" + r.detail + ")";
  }
  return s;
}

}  // namespace

int main() {
  ellgen::verify_config cfg;
  cfg.data_dir = ELLGEN_DATA_DIR;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  const auto reports = ellgen::run_verify(cfg);

  std::map<int, std::vector<const ellgen::report*>> by_criterion;
  for (const auto& r : reports) by_criterion[r.criterion].push_back(&r);

  int failures = 0;
  for (int k = 1; k <= 14; ++k) {
    const auto it = by_criterion.find(k);
    if (it == by_criterion.end()) {
      std::printf("criterion %2d: FAIL (no check registered)\n", k);
      ++failures;
      continue;
    }
    for (const auto* r : it->second) {
      std::printf("criterion %2d: %s %s (%.2fs)\n", k, r->pass ? "PASS" : "FAIL", describe(*r).c_str(), r->runtime);
      if (!r->pass) ++failures;
    }
  }
  if (auto it = by_criterion.find(0); it != by_criterion.end())
    for (const auto* r : it->second)
      std::printf("supplementary: %s %s (%.2fs)\n", r->pass ? "PASS" : "FAIL", describe(*r).c_str(), r->runtime);

  std::printf("%d of 14 criteria failing\n", failures);
  return failures == 0 ? 0 : 1;
}
