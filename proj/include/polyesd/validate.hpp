#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polyesd {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Built-in invariant suite: unit mass, closed-form equivalences, Weyl
/// inequalities, interlacing, quarter-circle self-checks, linearization and
/// potential identities. Runs in seconds.
std::vector<CheckResult> run_validation(std::uint64_t seed);

}  // namespace polyesd
