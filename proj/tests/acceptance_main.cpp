// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit code = number of failed criteria.

#include <cstdio>
#include <vector>

#include "wpr/config.hpp"
#include "wpr/verify.hpp"

int main() {
  using wpr::verify::CheckResult;
  wpr::RunConfig cfg;  // defaults; acceptance is pinned to the default seed

  struct Block {
    const char* label;
    std::vector<CheckResult> (*run)(const wpr::RunConfig&);
  };
  const std::vector<Block> blocks = {
      {"1", wpr::verify::criterion_scale_limit},
      {"2", wpr::verify::criterion_moment_limits},
      {"3", wpr::verify::criterion_sign_retrieval},
      {"4", wpr::verify::criterion_end_to_end},
      {"5", wpr::verify::criterion_injectivity},
      {"6", wpr::verify::criterion_counterexample},
      {"7", wpr::verify::criterion_two_scale},
      {"8", wpr::verify::criterion_numerics},
  };

  int failures = 0;
  for (const Block& block : blocks) {
    std::vector<CheckResult> checks;
    try {
      checks = block.run(cfg);
    } catch (const std::exception& e) {
      std::printf("[FAIL] criterion %s: exception: %s\n", block.label, e.what());
      ++failures;
      continue;
    }
    for (const CheckResult& c : checks) {
      std::printf("[%s] criterion %s: %s (measured %.3e, tolerance %.3e)%s%s\n",
                  c.pass ? "PASS" : "FAIL", block.label, c.name.c_str(), c.measured, c.tolerance,
                  c.detail.empty() ? "" : " -- ", c.detail.c_str());
      if (!c.pass) ++failures;
    }
    std::fflush(stdout);
  }
  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance check(s) failed\n", failures);
  return failures;
}
