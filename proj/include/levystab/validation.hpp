#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace levystab {

struct CheckResult {
  int criterion;
  std::string check;
  bool pass;
  std::string measured;
  std::string tolerance;
};

struct ValidationOptions {
  std::uint64_t seed = 42;
  std::vector<int> criteria;  // empty runs 1..8
  /// Negative control: perturbs the gamma values under test by one part in 1e9.
  bool corrupt_gamma = false;
};

/// Acceptance checks 1-8 with measured values. Deterministic in the options.
std::vector<CheckResult> run_validation(const ValidationOptions& options);

}  // namespace levystab
