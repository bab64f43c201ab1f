// JSON configuration: schema, full-field validation with every error
// reported at once, and the shipped desk-scale default.
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "snse/flow.hpp"

namespace snse {

struct ConfigValidation {
  ModelConfig config;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

// Parses and validates a raw JSON config; unknown keys warn, bad fields are
// all collected before returning.
ConfigValidation validate_config(const nlohmann::json& raw);

nlohmann::json config_to_json(const ModelConfig& cfg);

// Desk-scale default: l_max 31, grid 96x48, dt 1e-3, beta 1.5, two zonal
// noise modes, nu = 1, Omega = 2.
ModelConfig default_config();

}  // namespace snse
