#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace diffavg::checks {

/// Outcome of one end-to-end acceptance check.
struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst observed value of the headline metric
  double threshold = 0.0;  // bound the metric is compared against
  std::string detail;
  double seconds = 0.0;
};

inline constexpr std::uint64_t default_seed = 20240611;

CheckResult round_trip(std::uint64_t seed = default_seed);
CheckResult decay_ladder();
CheckResult ground_survival(std::uint64_t seed = default_seed);
CheckResult exact_operators(std::uint64_t seed = default_seed);
CheckResult oscillator();
CheckResult density(std::uint64_t seed = default_seed);
CheckResult quadratic_form(std::uint64_t seed = default_seed);
CheckResult asymptotics();
CheckResult lamb_shift();

/// Every check in order.
std::vector<CheckResult> run_all(std::uint64_t seed = default_seed);

/// "[PASS] 1 name: measured 1.2e-12 (threshold 1e-08) ..." one line.
std::string format(const CheckResult& r);

}  // namespace diffavg::checks
