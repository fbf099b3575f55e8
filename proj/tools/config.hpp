#pragma once

#include "koreg/harness.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace koreg::cli {

/// A simulation config: one experiment, possibly run under several methods.
struct SimulationSpec {
  std::string name;
  ExperimentConfig base;
  std::vector<SelectionMethod> methods;

  std::vector<ExperimentConfig> configs() const;
};

/// Strict parse: unknown keys and wrong types are errors naming the field.
SimulationSpec parse_simulation_config(const nlohmann::json& j);
SimulationSpec load_simulation_config(const std::string& path);

nlohmann::json to_json(const SimulationSpec& spec);
nlohmann::json summary_json(const SimulationSpec& spec, const std::vector<ExperimentReport>& reports);

}  // namespace koreg::cli
