#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bdp/rates.hpp"

// JSON schema for rates and profiles:
//
//   {"kind": "constant", "value": 1.0}
//   {"kind": "piecewise_constant", "breakpoints": [0, 1], "values": [2, 3]}
//   {"kind": "sinusoid", "base": 1.0, "amp": 0.5, "omega": 6.283185307179586, "phase": 0.0}
//   {"kind": "exp_decay", "a": 1.0, "c": 2.0, "offset": 0.1}
//
//   profile: {"lambda": <rate>, "mu": <rate>, "horizon": 10.0}
//
// Unknown keys are rejected. All failures raise ConfigError with the
// offending key in the message.

namespace bdp {

RateSpec rate_from_json(const nlohmann::json& j, const std::string& where = "rate");
nlohmann::json rate_to_json(const RateSpec& spec);

RateProfile profile_from_json(const nlohmann::json& j, const std::string& where = "profile");
nlohmann::json profile_to_json(const RateProfile& profile);

/// A single profile object, or {"profiles": [profile, ...]}.
std::vector<RateProfile> profiles_from_json(const nlohmann::json& j);

/// Reads and parses a JSON file; ConfigError on I/O or syntax errors.
nlohmann::json load_json_file(const std::string& path);

}  // namespace bdp
