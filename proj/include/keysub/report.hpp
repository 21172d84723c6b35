// Report serialization: a stable-key-order JSON document or an equivalent
// plain-text table.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "keysub/topology.hpp"

namespace keysub {

enum class OutputFormat { Json, Table };
OutputFormat parse_output_format(std::string_view text);

/// {property, subject, gamma, verdict, witnesses, primes, exp_cap, truncation, notes}.
nlohmann::ordered_json to_json(const VerdictReport& report);

struct CommandReport {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  Verdict verdict = Verdict::Holds;
  std::vector<std::string> witnesses;
  /// Only filled on request, so repeated runs stay byte-identical.
  std::optional<double> timing_ms;
  std::vector<VerdictReport> details;
  /// One human-readable line per sub-check (identity suites, battery criteria).
  std::vector<std::string> lines;
};

/// JSON keys: command, config, verdict, witnesses, timing_ms; a single decider
/// report is inlined (property, subject, gamma, primes, exp_cap, truncation),
/// several go under "details".
std::string emit_report(const CommandReport& report, OutputFormat format);

}  // namespace keysub
