#pragma once

#include "koreg/changepoint.hpp"
#include "koreg/datagen.hpp"
#include "koreg/model.hpp"
#include "koreg/solvers.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace koreg {

enum class SelectionMethod { KnockoffWStats, KnockoffGaps, CrossValidation };
enum class RandomnessMode { FreshDataEachRep, FixedDataFreshKnockoffs };

std::string to_string(SelectionMethod m);
std::string to_string(RandomnessMode m);
SelectionMethod parse_selection_method(const std::string& name);
RandomnessMode parse_randomness_mode(const std::string& name);

struct ExperimentConfig {
  Eigen::Index n = 200;
  int p = 50;
  int B = 100;
  ModelFamily family = ModelFamily::linear();
  Vector beta;
  double edge_prob = 0.2;
  GraphOptions graph;
  SelectionMethod method = SelectionMethod::KnockoffWStats;
  RandomnessMode randomness_mode = RandomnessMode::FreshDataEachRep;
  std::uint64_t base_seed = 1;
  SolverOptions solver;
  int folds = 10;
  int workers = 1;
  Vector intercept_targets;  // empty: family default

  void validate() const;
};

struct ExperimentReport {
  SelectionMethod method = SelectionMethod::KnockoffWStats;
  int B = 0;
  Vector beta;
  Vector detection_rate;                              // length p
  std::vector<std::vector<Eigen::Index>> selections;  // per repetition
  std::vector<ThresholdStatus> statuses;              // per repetition (knockoff methods)
  double mean_relevant_rate = 0.0;                    // over beta != 0
  double mean_null_rate = 0.0;                        // over beta == 0
};

/// Seeds shared by all methods of an experiment so that comparisons are paired.
struct RepetitionSeeds {
  std::uint64_t graph;
  std::uint64_t covariates;
  std::uint64_t response;
  std::uint64_t selection;  // knockoff permutation or fold assignment
};
RepetitionSeeds repetition_seeds(const ExperimentConfig& config, int rep);

/// The dataset of repetition rep (deterministic in the config seeds).
Dataset experiment_dataset(const ExperimentConfig& config, const CovariateModel& model, int rep);

/// K-fold deviance-minimizing lambda on the full-data grid; returns the
/// support of the full-data fit at that lambda.
std::vector<Eigen::Index> cv_select(const Dataset& data, int folds, std::uint64_t seed, const SolverOptions& opts = {});

/// Mean held-out deviance per grid point (exposed for tests).
Vector cv_deviance(const Dataset& data, int folds, std::uint64_t seed, const SolverOptions& opts, Vector* grid_out = nullptr);

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Runs each config (same p required) and collects paired reports.
std::vector<ExperimentReport> compare_methods(const std::vector<ExperimentConfig>& configs);

/// Wide table: index, beta, one rate column per method.
void write_comparison_csv(std::ostream& out, const std::vector<ExperimentReport>& reports);

/// Long table: index, beta, method, rate.
void write_report_csv(std::ostream& out, const std::vector<ExperimentReport>& reports);

}  // namespace koreg
