#pragma once

#include <string>

#include <json.hpp>

#include "ch2/simulation.hpp"
#include "ch2/state.hpp"

namespace ch2 {

using json = nlohmann::json;

json to_json(const LagrangianState& X);
json to_json(const EulerianState& e);
/// Both throw ConfigError on missing or malformed fields.
LagrangianState lagrangian_from_json(const json& j);
EulerianState eulerian_from_json(const json& j);

/// A state file holds either kind; "kind" tells which.
struct StateFile {
  bool lagrangian = false;
  LagrangianState lag;
  EulerianState eul;
};

json read_json(const std::string& path);  // IoError, ConfigError
void write_json(const std::string& path, const json& j);
StateFile read_state(const std::string& path);
EulerianState read_eulerian(const std::string& path);

json config_to_json(const SimulationConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
SimulationConfig config_from_json(const json& j);
SimulationConfig read_config(const std::string& path);

/// FNV-1a of the canonical config JSON (output_dir excluded), as 16 hex digits.
std::string config_hash(const SimulationConfig& config);

/// Variable that overrides the configured output directory.
inline constexpr const char* kOutputDirEnv = "CH2_OUTPUT_DIR";
std::string resolve_output_dir(const SimulationConfig& config);

/// snapshots.csv, atoms.csv, energy.csv, events.csv and final_state.json.
void write_outputs(const TimeSeries& ts, const SimulationConfig& config, const std::string& dir);

/// 17 significant digits.
std::string format_double(double v);

}  // namespace ch2
