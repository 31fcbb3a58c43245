#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace biasperm {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteOptions {
  bool fast = false;        // restrict exhaustive checks to n <= 4
  std::uint64_t seed = 1;   // drives the randomized sub-checks only
};

/// Runs every module's invariants. Exhaustive ranges shrink under `fast`.
std::vector<CheckResult> run_invariant_suite(const SuiteOptions& options);

}  // namespace biasperm
