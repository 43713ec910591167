#pragma once

// Acceptance criteria 1-12: each returns a pass/fail verdict with the
// measured quantity, the pinned tolerance and the runtime.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace brl::acceptance {

struct Options {
  int threads = 0;
  std::uint64_t seed = 1;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  double measured = 0;
  std::string relation = "<=";
  double tolerance = 0;
  double seconds = 0;
  double time_limit = 0;  // seconds
  bool within_time = true;
  bool passed = false;
  std::string detail;
};

inline constexpr int kCriteria = 12;

/// Throws std::out_of_range for ids outside 1..12.
CriterionResult run_criterion(int id, const Options& opts);

/// Runs the criteria in `ids` (all when empty), calling `on_result` after each.
std::vector<CriterionResult> run_all(const Options& opts, const std::vector<int>& ids = {},
                                     const std::function<void(const CriterionResult&)>& on_result = {});

/// One line: "PASS  3 <title>: measured ... <= tol ... (time s / limit s) detail".
std::string format_line(const CriterionResult& r);

}  // namespace brl::acceptance
