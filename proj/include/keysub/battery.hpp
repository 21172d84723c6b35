// The acceptance battery: twelve exact checks of the worked facts, shared by
// the acceptance test binary and the `reproduce-paper` command.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "keysub/ring.hpp"

namespace keysub {

struct CriterionResult {
  int id;
  std::string title;
  bool passed;
  std::string detail;
  double seconds;

  /// `[PASS] 3 <title> -- <detail>`.
  std::string line() const;
};

struct BatteryOptions {
  std::uint64_t seed = 1;
  /// Random samples per configuration for the identity criteria.
  int trials = 1000;
};

inline constexpr int kCriterionCount = 12;

/// Runs one criterion; exceptions become failures carrying their message.
CriterionResult run_criterion(int id, const BatteryOptions& options = {});
std::vector<CriterionResult> run_battery(const BatteryOptions& options = {}, const std::vector<int>& only = {});

struct IdentitySuiteResult {
  std::vector<std::string> lines;  // one per sub-suite
  bool passed = true;
};

/// Group axioms and the commutator/projection identities in UT(n, ring), plus
/// the H(m) law, commutator, UT(3) and switch isomorphisms over the same ring.
IdentitySuiteResult identity_suite(int n, const RingSpec& ring, int trials, std::uint64_t seed);

}  // namespace keysub
