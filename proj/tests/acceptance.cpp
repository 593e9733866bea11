// End-to-end acceptance criteria; one line per criterion, nonzero exit on any failure.
#include <cstdio>
#include <exception>

#include "diffavg/checks.hpp"

int main() {
  using namespace diffavg::checks;
  using Check = CheckResult (*)();
  const Check all[] = {
      [] { return round_trip(); },      decay_ladder,
      [] { return ground_survival(); }, [] { return exact_operators(); },
      oscillator,                       [] { return density(); },
      [] { return quadratic_form(); },  asymptotics,
      lamb_shift,
  };
  int failed = 0, id = 0;
  for (Check c : all) {
    ++id;
    try {
      const CheckResult r = c();
      std::printf("%s\n", format(r).c_str());
      failed += r.passed ? 0 : 1;
    } catch (const std::exception& e) {
      std::printf("[FAIL] %d raised: %s\n", id, e.what());
      ++failed;
    }
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", id - failed, id);
  return failed == 0 ? 0 : 1;
}
