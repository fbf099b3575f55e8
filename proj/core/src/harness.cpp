#include "koreg/harness.hpp"

#include "koreg/csv.hpp"
#include "koreg/error.hpp"
#include "koreg/knockoff.hpp"
#include "koreg/rng.hpp"

#include <fmt/format.h>

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

namespace koreg {

std::string to_string(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::KnockoffWStats: return "stats";
    case SelectionMethod::KnockoffGaps: return "gaps";
    case SelectionMethod::CrossValidation: return "cv";
  }
  return "unknown";
}

std::string to_string(RandomnessMode m) {
  switch (m) {
    case RandomnessMode::FreshDataEachRep: return "fresh_data";
    case RandomnessMode::FixedDataFreshKnockoffs: return "fixed_data";
  }
  return "unknown";
}

SelectionMethod parse_selection_method(const std::string& name) {
  if (name == "stats") return SelectionMethod::KnockoffWStats;
  if (name == "gaps") return SelectionMethod::KnockoffGaps;
  if (name == "cv") return SelectionMethod::CrossValidation;
  throw InvalidArgument(fmt::format("unknown selection method '{}' (expected stats, gaps or cv)", name));
}

RandomnessMode parse_randomness_mode(const std::string& name) {
  if (name == "fresh_data") return RandomnessMode::FreshDataEachRep;
  if (name == "fixed_data") return RandomnessMode::FixedDataFreshKnockoffs;
  throw InvalidArgument(fmt::format("unknown randomness mode '{}' (expected fresh_data or fixed_data)", name));
}

void ExperimentConfig::validate() const {
  if (B < 1) throw InvalidArgument(fmt::format("B must be >= 1, got {}", B));
  if (p < 1) throw InvalidArgument(fmt::format("p must be >= 1, got {}", p));
  if (n < 2) throw InvalidArgument(fmt::format("n must be >= 2, got {}", n));
  if (beta.size() != p) throw InvalidArgument(fmt::format("beta has length {} but p = {}", beta.size(), p));
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
  if (method == SelectionMethod::CrossValidation && (folds < 2 || folds > n)) {
    throw InvalidArgument(fmt::format("folds must lie in [2, n], got {}", folds));
  }
  solver.validate();
}

namespace {

enum Stream : std::uint64_t { kGraph = 1, kCovariates = 2, kResponse = 3, kSelection = 4 };

std::uint64_t family_tag(const ModelFamily& f) {
  return static_cast<std::uint64_t>(f.kind()) * 1000 + static_cast<std::uint64_t>(f.levels());
}

}  // namespace

RepetitionSeeds repetition_seeds(const ExperimentConfig& config, int rep) {
  const auto r = static_cast<std::uint64_t>(rep);
  const auto data_rep = config.randomness_mode == RandomnessMode::FixedDataFreshKnockoffs ? 0 : r;
  const auto tag = family_tag(config.family);
  return {
      derive_seed(config.base_seed, {kGraph}),
      // Covariates ignore the family so that all families share a design.
      derive_seed(config.base_seed, {kCovariates, data_rep}),
      derive_seed(config.base_seed, {kResponse, data_rep, tag}),
      derive_seed(config.base_seed, {kSelection, r, tag}),
  };
}

Dataset experiment_dataset(const ExperimentConfig& config, const CovariateModel& model, int rep) {
  const auto seeds = repetition_seeds(config, rep);
  Matrix X = sample_covariates(model, config.n, seeds.covariates);
  ResponseSpec spec;
  spec.family = config.family;
  spec.beta = config.beta;
  const Vector targets =
      config.intercept_targets.size() > 0 ? config.intercept_targets : default_intercept_targets(config.family);
  spec.intercepts = auto_intercepts(config.family, X, config.beta, targets);
  Vector y = simulate_response(spec, X, seeds.response);
  return Dataset(std::move(X), std::move(y), config.family);
}

namespace {

struct RepOutcome {
  std::vector<Eigen::Index> selected;
  ThresholdStatus status = ThresholdStatus::Ok;
};

RepOutcome run_repetition(const ExperimentConfig& config, const CovariateModel& model, int rep) {
  const Dataset data = experiment_dataset(config, model, rep);
  const auto seeds = repetition_seeds(config, rep);
  RepOutcome out;
  if (config.method == SelectionMethod::CrossValidation) {
    out.selected = cv_select(data, config.folds, seeds.selection, config.solver);
    return out;
  }
  const auto run = knockoff_statistics(data, config.solver, seeds.selection);
  const auto sorted = SortedPositiveW::from(run.W);
  const auto thr = threshold(sorted, config.method == SelectionMethod::KnockoffWStats ? ThresholdMethod::WStats
                                                                                      : ThresholdMethod::Gaps);
  out.status = thr.status;
  if (thr.status != ThresholdStatus::Empty) out.selected = select(run.W, thr.s);
  return out;
}

double mean_over(const Vector& rate, const Vector& beta, bool relevant) {
  double sum = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < rate.size(); ++i) {
    if ((beta[i] != 0.0) == relevant) {
      sum += rate[i];
      ++count;
    }
  }
  return count ? sum / count : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto model = random_graph_precision(config.p, config.edge_prob, repetition_seeds(config, 0).graph, config.graph);

  std::vector<RepOutcome> outcomes(static_cast<std::size_t>(config.B));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(config.B));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int rep = next++; rep < config.B; rep = next++) {
      try {
        outcomes[static_cast<std::size_t>(rep)] = run_repetition(config, model, rep);
      } catch (...) {
        errors[static_cast<std::size_t>(rep)] = std::current_exception();
      }
    }
  };
  const int nthreads = std::min(config.workers, config.B);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  // Lowest failing repetition wins, independent of scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentReport report;
  report.method = config.method;
  report.B = config.B;
  report.beta = config.beta;
  report.detection_rate = Vector::Zero(config.p);
  for (auto& o : outcomes) {
    for (auto i : o.selected) report.detection_rate[i] += 1.0;
    report.selections.push_back(std::move(o.selected));
    report.statuses.push_back(o.status);
  }
  report.detection_rate /= static_cast<double>(config.B);
  report.mean_relevant_rate = mean_over(report.detection_rate, config.beta, true);
  report.mean_null_rate = mean_over(report.detection_rate, config.beta, false);
  return report;
}

std::vector<ExperimentReport> compare_methods(const std::vector<ExperimentConfig>& configs) {
  if (configs.empty()) throw InvalidArgument("no experiment configurations to compare");
  for (const auto& c : configs) {
    if (c.p != configs.front().p) {
      throw InvalidArgument(fmt::format("mismatched p across configs: {} vs {}", c.p, configs.front().p));
    }
  }
  std::vector<ExperimentReport> out;
  out.reserve(configs.size());
  for (const auto& c : configs) out.push_back(run_experiment(c));
  return out;
}

namespace {

std::vector<std::string> column_names(const std::vector<ExperimentReport>& reports) {
  std::vector<std::string> names;
  std::map<std::string, int> seen;
  for (const auto& r : reports) {
    const std::string base = to_string(r.method);
    const int k = ++seen[base];
    names.push_back(k == 1 ? base : fmt::format("{}_{}", base, k));
  }
  return names;
}

}  // namespace

void write_comparison_csv(std::ostream& out, const std::vector<ExperimentReport>& reports) {
  if (reports.empty()) return;
  const auto names = column_names(reports);
  out << "index,beta";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  const auto p = reports.front().detection_rate.size();
  for (Eigen::Index i = 0; i < p; ++i) {
    out << i + 1 << ',' << format_number(reports.front().beta[i]);
    for (const auto& r : reports) out << ',' << format_number(r.detection_rate[i]);
    out << '\n';
  }
}

void write_report_csv(std::ostream& out, const std::vector<ExperimentReport>& reports) {
  const auto names = column_names(reports);
  out << "index,beta,method,rate\n";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    for (Eigen::Index i = 0; i < r.detection_rate.size(); ++i) {
      out << i + 1 << ',' << format_number(r.beta[i]) << ',' << names[k] << ',' << format_number(r.detection_rate[i])
          << '\n';
    }
  }
}

}  // namespace koreg
