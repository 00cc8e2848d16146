#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "paretobf/network.hpp"

namespace paretobf::tools {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Worst measured residual (or violation count).
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyOptions {
  /// 0 selects the suite default.
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  /// Channels of this transmitter replace random draws when set.
  std::optional<Scenario> scenario;
  std::string transmitter;
};

/// convexity, hyperplane, full-power, two-user, null-shaping, pareto-oracle, power-rule.
const std::vector<std::string>& suite_names();
std::size_t default_trials(const std::string& suite);

/// Throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& options);

}  // namespace paretobf::tools
