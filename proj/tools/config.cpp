#include "config.hpp"

#include "koreg/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>

namespace koreg::cli {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(fmt::format("config field '{}': {}", key, e.what()));
  }
}

template <typename T>
T required(const json& j, const std::string& key) {
  if (!j.contains(key)) throw InvalidArgument(fmt::format("config field '{}' is required", key));
  return field<T>(j, key, T{});
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw InvalidArgument(fmt::format("unknown {} field '{}'", where, key));
  }
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json rate_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

}  // namespace

std::vector<ExperimentConfig> SimulationSpec::configs() const {
  std::vector<ExperimentConfig> out;
  for (auto m : methods) {
    auto c = base;
    c.method = m;
    out.push_back(std::move(c));
  }
  return out;
}

SimulationSpec parse_simulation_config(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  reject_unknown(j,
                 {"name", "n", "p", "B", "family", "levels", "beta", "beta_blocks", "edge_prob", "edge_weight",
                  "eigen_floor", "method", "methods", "randomness_mode", "base_seed", "folds", "workers",
                  "intercept_targets", "solver"},
                 "config");
  SimulationSpec spec;
  auto& c = spec.base;
  spec.name = field<std::string>(j, "name", "experiment");
  c.n = required<Eigen::Index>(j, "n");
  c.p = required<int>(j, "p");
  c.B = field<int>(j, "B", 100);
  c.family = ModelFamily::parse(field<std::string>(j, "family", "linear"), field<int>(j, "levels", 3));

  if (j.contains("beta") == j.contains("beta_blocks")) {
    throw InvalidArgument("config needs exactly one of 'beta' or 'beta_blocks'");
  }
  if (j.contains("beta")) {
    c.beta = to_vector(field<std::vector<double>>(j, "beta", {}));
  } else {
    std::vector<BetaBlock> blocks;
    const auto& arr = j.at("beta_blocks");
    if (!arr.is_array()) throw InvalidArgument("config field 'beta_blocks' must be an array");
    for (const auto& b : arr) {
      reject_unknown(b, {"value", "count"}, "beta_blocks");
      blocks.push_back({required<double>(b, "value"), required<int>(b, "count")});
    }
    c.beta = block_beta(blocks, c.p);
  }

  c.edge_prob = field<double>(j, "edge_prob", 0.2);
  c.graph.edge_weight = field<double>(j, "edge_weight", c.graph.edge_weight);
  c.graph.eigen_floor = field<double>(j, "eigen_floor", c.graph.eigen_floor);
  if (j.contains("method") && j.contains("methods")) {
    throw InvalidArgument("config has both 'method' and 'methods'");
  }
  if (j.contains("methods")) {
    for (const auto& m : field<std::vector<std::string>>(j, "methods", {})) {
      spec.methods.push_back(parse_selection_method(m));
    }
  } else {
    spec.methods.push_back(parse_selection_method(field<std::string>(j, "method", "stats")));
  }
  if (spec.methods.empty()) throw InvalidArgument("config field 'methods' is empty");
  c.randomness_mode = parse_randomness_mode(field<std::string>(j, "randomness_mode", "fresh_data"));
  c.base_seed = field<std::uint64_t>(j, "base_seed", 1);
  c.folds = field<int>(j, "folds", 10);
  c.workers = field<int>(j, "workers", 1);
  if (j.contains("intercept_targets")) c.intercept_targets = to_vector(field<std::vector<double>>(j, "intercept_targets", {}));

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    if (!s.is_object()) throw InvalidArgument("config field 'solver' must be an object");
    reject_unknown(s, {"grid_size", "grid_ratio", "tol", "max_iter", "zero_clip"}, "solver");
    c.solver.grid_size = field<int>(s, "grid_size", c.solver.grid_size);
    c.solver.grid_ratio = field<double>(s, "grid_ratio", c.solver.grid_ratio);
    c.solver.tol = field<double>(s, "tol", c.solver.tol);
    c.solver.max_iter = field<long>(s, "max_iter", c.solver.max_iter);
    c.solver.zero_clip = field<double>(s, "zero_clip", c.solver.zero_clip);
  }
  for (const auto& cfg : spec.configs()) cfg.validate();
  return spec;
}

SimulationSpec load_simulation_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(fmt::format("cannot open config '{}'", path));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(fmt::format("config '{}' is not valid JSON: {}", path, e.what()));
  }
  return parse_simulation_config(j);
}

json to_json(const SimulationSpec& spec) {
  const auto& c = spec.base;
  json methods = json::array();
  for (auto m : spec.methods) methods.push_back(to_string(m));
  return {
      {"name", spec.name},
      {"n", c.n},
      {"p", c.p},
      {"B", c.B},
      {"family", c.family.name()},
      {"levels", c.family.levels()},
      {"beta", std::vector<double>(c.beta.data(), c.beta.data() + c.beta.size())},
      {"edge_prob", c.edge_prob},
      {"edge_weight", c.graph.edge_weight},
      {"eigen_floor", c.graph.eigen_floor},
      {"methods", methods},
      {"randomness_mode", to_string(c.randomness_mode)},
      {"base_seed", c.base_seed},
      {"folds", c.folds},
      {"solver",
       {{"grid_size", c.solver.grid_size},
        {"grid_ratio", c.solver.grid_ratio},
        {"tol", c.solver.tol},
        {"max_iter", c.solver.max_iter},
        {"zero_clip", c.solver.zero_clip}}},
  };
}

json summary_json(const SimulationSpec& spec, const std::vector<ExperimentReport>& reports) {
  json out;
  out["config"] = to_json(spec);
  json arr = json::array();
  for (const auto& r : reports) {
    int empty = 0, degenerate = 0;
    for (auto s : r.statuses) {
      empty += s == ThresholdStatus::Empty;
      degenerate += s == ThresholdStatus::Degenerate;
    }
    int empty_models = 0;
    for (const auto& sel : r.selections) empty_models += sel.empty();
    arr.push_back({{"method", to_string(r.method)},
                   {"B", r.B},
                   {"mean_relevant_rate", rate_or_null(r.mean_relevant_rate)},
                   {"mean_null_rate", rate_or_null(r.mean_null_rate)},
                   {"empty_models", empty_models},
                   {"no_positive_statistics", empty},
                   {"degenerate_thresholds", degenerate}});
  }
  out["methods"] = arr;
  return out;
}

}  // namespace koreg::cli
