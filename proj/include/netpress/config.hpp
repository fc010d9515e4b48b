#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "netpress/model.hpp"

namespace netpress {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class PolicyKind { Backpressure, SoftBackpressure, Newton, Accelerated };

std::optional<PolicyKind> parse_policy_name(const std::string& name);
const char* policy_name(PolicyKind kind);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::SoftBackpressure;
  double epsilon = 1.0;
  int add_order = 1;   // ADD-N order, 0..3
  double ridge = 1.0;  // regularizer for the centralized Newton policy
};

struct RunSettings {
  int horizon = 0;
  std::uint64_t seed = 0;
  int warmup = 0;
};

struct OutputConfig {
  std::string csv_path;
  std::string svg_path;
};

struct Scenario {
  Model model;
  PolicyConfig policy;
  RunSettings run;
  OutputConfig output;
  NcField initial_queues;  // empty -> all-zero queues
};

/// Parses and validates a scenario config file. Throws ConfigError on
/// malformed input and ValidationError on model invariant violations.
Scenario load_config(const std::string& path);

/// Same, from an in-memory JSON document.
Scenario parse_scenario(const std::string& json_text);

}  // namespace netpress
