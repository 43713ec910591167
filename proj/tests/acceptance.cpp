// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [ids...] [--threads N] [--seed S]
//
// Exits 1 when any selected criterion fails.

#include "brl/acceptance.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> ids;
  brl::acceptance::Options opts;
  app.add_option("ids", ids, "criteria to run (default: all)")->check(CLI::Range(1, brl::acceptance::kCriteria));
  app.add_option("--threads", opts.threads, "worker threads, 0 = all cores");
  app.add_option("--seed", opts.seed, "seed for the sampled criteria");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  brl::acceptance::run_all(opts, ids, [&](const brl::acceptance::CriterionResult& r) {
    std::cout << brl::acceptance::format_line(r) << std::endl;
    if (!r.passed) ++failed;
  });
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
