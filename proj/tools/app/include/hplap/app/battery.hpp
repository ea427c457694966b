#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hplap::app {

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured quantities against their pinned tolerances
};

struct BatteryOptions {
  bool quick = false;      // smaller samples; same tolerances
  unsigned threads = 0;    // 0 selects thread_budget()
  std::uint64_t seed = 0;  // random draws in the property checks
};

inline constexpr int kCriterionCount = 12;

/// Parallelism cap: HARDY_PLAPLACE_THREADS if set, else the hardware count.
unsigned thread_budget();

/// Runs the acceptance battery; results are ordered by id whatever the thread count.
std::vector<Criterion> run_battery(const BatteryOptions& options = {});

/// One criterion by id (1..12); errors are reported as failures.
Criterion run_criterion(int id, const BatteryOptions& options = {});

}  // namespace hplap::app
