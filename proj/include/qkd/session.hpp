#pragma once

#include <string>

#include <json.hpp>

#include "qkd/channel.hpp"
#include "qkd/protocol.hpp"

namespace qkd {

// Everything a single run needs: protocol parameters plus the eavesdropper.
struct SessionConfig {
  ProtocolConfig protocol;
  EveConfig eve;

  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

// Strict parser: unknown keys are rejected with a ConfigError naming the key,
// as are wrong types and out-of-range values. Missing keys take defaults.
SessionConfig parse_session_config(const nlohmann::json& j);
SessionConfig load_session_config(const std::string& path);

nlohmann::ordered_json config_to_json(const SessionConfig& cfg);

struct SessionReport {
  SessionConfig config;
  SessionOutcome outcome;

  friend bool operator==(const SessionReport&, const SessionReport&) = default;
};

// Serialization round-trips losslessly: report_from_json(report_to_json(r)) == r.
nlohmann::ordered_json report_to_json(const SessionReport& report);
SessionReport report_from_json(const nlohmann::json& j);

// Runs one session under the config and packages the report.
SessionReport run_session_report(const SessionConfig& cfg);

}  // namespace qkd
