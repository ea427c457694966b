#include <cstdio>
#include <cstring>

#include "hplap/app/battery.hpp"

int main(int argc, char** argv) {
  hplap::app::BatteryOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
  }
  int failed = 0;
  for (const auto& c : hplap::app::run_battery(opt)) {
    std::printf("[%s] %02d %s: %s\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.detail.c_str());
    failed += !c.pass;
  }
  std::printf("%d of %d criteria passed\n", hplap::app::kCriterionCount - failed,
              hplap::app::kCriterionCount);
  return failed == 0 ? 0 : 1;
}
