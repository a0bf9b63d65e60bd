#pragma once

#include <string>

#include <json.hpp>

#include "p2e/sim.hpp"

namespace p2e::io {

/// Builds a scenario from its JSON document. Relative `profile_csv` paths are
/// resolved against `base_dir`. Unknown keys are rejected.
sim::Scenario scenario_from_json(const nlohmann::json& doc, const std::string& base_dir = ".");

/// Reads a scenario file; IoError if unreadable or not JSON, DomainError on bad content.
sim::Scenario read_scenario(const std::string& path);

nlohmann::ordered_json scenario_to_json(const sim::Scenario& s);

}  // namespace p2e::io
