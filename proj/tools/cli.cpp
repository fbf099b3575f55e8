#include "cli.hpp"

#include "config.hpp"
#include "koreg/csv.hpp"
#include "koreg/error.hpp"
#include "koreg/knockoff.hpp"
#include "koreg/rng.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace koreg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct DataArgs {
  std::string path;
  std::string family = "linear";
  int levels = 3;
};

struct SolverArgs {
  SolverOptions opts;
};

void add_data_args(CLI::App* cmd, DataArgs& a) {
  cmd->add_option("data", a.path, "CSV file with a header row and a column named y")->required();
  cmd->add_option("--family", a.family, "linear, logistic or cumlogit")
      ->check(CLI::IsMember({"linear", "logistic", "cumlogit"}));
  cmd->add_option("--levels", a.levels, "number of ordered levels for cumlogit")->check(CLI::Range(3, 1000));
}

void add_solver_args(CLI::App* cmd, SolverOptions& o) {
  cmd->add_option("--grid-size", o.grid_size, "number of penalty values");
  cmd->add_option("--grid-ratio", o.grid_ratio, "lambda_min / lambda_max");
  cmd->add_option("--tol", o.tol, "KKT tolerance");
  cmd->add_option("--max-iter", o.max_iter, "coordinate sweeps per penalty value");
  cmd->add_option("--zero-clip", o.zero_clip, "magnitude below which a coefficient counts as zero");
}

Dataset load(const DataArgs& a, std::ostream& err) {
  auto data = read_dataset_csv(a.path, ModelFamily::parse(a.family, a.levels));
  for (const auto& w : data.warnings()) fmt::print(err, "warning: {}\n", w);
  return data;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument(fmt::format("cannot write '{}'", path.string()));
  return f;
}

std::string covariate_name(const Dataset& data, Eigen::Index j) {
  if (static_cast<std::size_t>(j) < data.names().size()) return data.names()[static_cast<std::size_t>(j)];
  return fmt::format("x{}", j + 1);
}

// Positive statistics from largest to smallest.
void print_ranking(std::ostream& out, const Dataset& data, const SortedPositiveW& sorted) {
  fmt::print(out, "rank,index,name,W\n");
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    const std::size_t k = sorted.size() - 1 - r;
    fmt::print(out, "{},{},{},{}\n", r + 1, sorted.indices[k] + 1, covariate_name(data, sorted.indices[k]),
               format_number(sorted.values[k]));
  }
}

double prompt_threshold(std::istream& in, std::ostream& out) {
  fmt::print(out, "threshold> ");
  out.flush();
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("no threshold given on standard input");
  std::istringstream parse(line);
  double s = 0.0;
  std::string rest;
  if (!(parse >> s) || (parse >> rest)) throw InvalidArgument(fmt::format("cannot parse '{}' as a threshold", line));
  return s;
}

int cmd_fit(const DataArgs& a, const SolverOptions& opts, const std::string& out_path, std::ostream& out,
            std::ostream& err) {
  const auto data = load(a, err);
  const auto z = standardize(data.X());
  const auto path = fit_path(data.with_design(z.X), opts);
  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < data.p(); ++j) names.push_back(covariate_name(data, j));
  if (out_path.empty()) {
    write_path_csv(out, path, names);
  } else {
    auto f = open_output(out_path);
    write_path_csv(f, path, names);
  }
  return Ok;
}

struct SelectArgs {
  std::string method = "stats";
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold;
  std::string out_dir;
  bool print = false;
};

int cmd_select(const DataArgs& a, const SolverOptions& opts, const SelectArgs& s, std::istream& in,
               std::ostream& out, std::ostream& err) {
  const auto method = parse_threshold_method(s.method);
  if (method != ThresholdMethod::Manual && s.threshold) {
    throw InvalidArgument("--threshold only applies to --method manual");
  }
  const auto data = load(a, err);
  const std::uint64_t seed = s.seed ? *s.seed : fresh_seed();
  const auto run = knockoff_statistics(data, opts, seed);
  const auto sorted = SortedPositiveW::from(run.W);

  ThresholdResult result;
  if (method == ThresholdMethod::Manual) {
    double value = 0.0;
    if (s.threshold) {
      value = *s.threshold;
    } else {
      print_ranking(out, data, sorted);
      value = prompt_threshold(in, out);
    }
    result = manual_threshold(value);
  } else {
    result = threshold(sorted, method);
  }
  const auto chosen = select(run.W, result.s);

  fs::create_directories(s.out_dir);
  {
    auto f = open_output(fs::path(s.out_dir) / "wstats.csv");
    std::vector<char> picked(static_cast<std::size_t>(data.p()), 0);
    for (auto j : chosen) picked[static_cast<std::size_t>(j)] = 1;
    fmt::print(f, "index,name,T,T_tilde,W,selected\n");
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      fmt::print(f, "{},{},{},{},{},{}\n", j + 1, covariate_name(data, j), format_number(run.T[j]),
                 format_number(run.T_tilde[j]), format_number(run.W[j]), int(picked[static_cast<std::size_t>(j)]));
    }
  }

  json sel;
  std::vector<Eigen::Index> one_based;
  std::vector<std::string> names;
  for (auto j : chosen) {
    one_based.push_back(j + 1);
    names.push_back(covariate_name(data, j));
  }
  sel["indices"] = one_based;
  sel["names"] = names;
  sel["s"] = std::isinf(result.s) ? json(nullptr) : json(result.s);
  sel["method"] = to_string(result.method);
  sel["status"] = to_string(result.status);
  sel["seed"] = seed;
  if (result.cusum_candidate) sel["cusum_candidate"] = *result.cusum_candidate;
  if (result.dp_candidate) sel["dp_candidate"] = *result.dp_candidate;
  {
    auto f = open_output(fs::path(s.out_dir) / "selection.json");
    f << sel.dump(2) << '\n';
  }

  if (result.status == ThresholdStatus::Empty) {
    fmt::print(err, "warning: no positive knockoff statistic; nothing selected\n");
  } else if (result.status == ThresholdStatus::Degenerate) {
    fmt::print(err, "warning: only {} positive statistics; all kept without a change-point search\n",
               sorted.size());
  }
  if (s.print) {
    if (!(method == ThresholdMethod::Manual && !s.threshold)) print_ranking(out, data, sorted);
    fmt::print(out, "threshold: {} ({}, {})\n", format_number(result.s), to_string(result.method),
               to_string(result.status));
    fmt::print(out, "selected: {}\n", fmt::join(names, " "));
  }
  return Ok;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, std::optional<int> workers,
                 std::ostream& out) {
  auto spec = load_simulation_config(config_path);
  if (workers) spec.base.workers = *workers;
  spec.base.validate();
  const auto reports = compare_methods(spec.configs());

  fs::create_directories(out_dir);
  {
    auto f = open_output(fs::path(out_dir) / "report.csv");
    write_report_csv(f, reports);
  }
  {
    auto f = open_output(fs::path(out_dir) / "comparison.csv");
    write_comparison_csv(f, reports);
  }
  {
    auto f = open_output(fs::path(out_dir) / "summary.json");
    f << summary_json(spec, reports).dump(2) << '\n';
  }
  for (const auto& r : reports) {
    fmt::print(out, "{}: relevant {} null {}\n", to_string(r.method), format_number(r.mean_relevant_rate),
               format_number(r.mean_null_rate));
  }
  return Ok;
}

int cmd_generate(const std::string& config_path, int rep, const std::string& out_path, std::ostream& out) {
  const auto spec = load_simulation_config(config_path);
  if (rep < 0 || rep >= spec.base.B) {
    throw InvalidArgument(fmt::format("--rep must lie in [0, {}), got {}", spec.base.B, rep));
  }
  const auto seeds = repetition_seeds(spec.base, rep);
  const auto model = random_graph_precision(spec.base.p, spec.base.edge_prob, seeds.graph, spec.base.graph);
  const auto data = experiment_dataset(spec.base, model, rep);
  if (out_path.empty()) {
    write_dataset_csv(out, data);
  } else {
    auto f = open_output(out_path);
    write_dataset_csv(f, data);
  }
  return Ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knockoff variable selection for L1-penalized regressions", "koreg"};
  app.require_subcommand(1);

  DataArgs data_args;
  SolverOptions solver;
  std::string fit_out;
  auto* fit = app.add_subcommand("fit", "Fit the penalized path on a standardized design and write it as CSV");
  add_data_args(fit, data_args);
  add_solver_args(fit, solver);
  fit->add_option("--out", fit_out, "output CSV (default: standard output)");

  SelectArgs sel;
  std::uint64_t seed_value = 0;
  auto* select_cmd = app.add_subcommand("select", "Knockoff selection with an automatic or manual threshold");
  add_data_args(select_cmd, data_args);
  add_solver_args(select_cmd, solver);
  select_cmd->add_option("--method", sel.method, "stats, gaps or manual")
      ->check(CLI::IsMember({"stats", "gaps", "manual"}));
  auto* seed_opt = select_cmd->add_option("--seed", seed_value, "knockoff permutation seed (default: random)");
  double threshold_value = 0.0;
  auto* threshold_opt = select_cmd->add_option("--threshold", threshold_value, "threshold for --method manual");
  select_cmd->add_option("--out", sel.out_dir, "output directory")->required();
  select_cmd->add_flag("--print", sel.print, "print the ranking and the selection");

  std::string config_path, sim_out;
  int workers_value = 1;
  auto* simulate = app.add_subcommand("simulate", "Run a simulation experiment from a JSON config");
  simulate->add_option("config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", sim_out, "output directory")->required();
  auto* workers_opt = simulate->add_option("--workers", workers_value, "worker threads")->check(CLI::PositiveNumber);

  std::string gen_config, gen_out;
  int gen_rep = 0;
  auto* generate = app.add_subcommand("generate", "Write the simulated dataset of one repetition as CSV");
  generate->add_option("config", gen_config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  generate->add_option("--rep", gen_rep, "0-based repetition");
  generate->add_option("--out", gen_out, "output CSV (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return Ok;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    fmt::print(err, "run 'koreg --help' for usage\n");
    return UsageError;
  }

  try {
    if (*fit) return cmd_fit(data_args, solver, fit_out, out, err);
    if (*select_cmd) {
      if (*seed_opt) sel.seed = seed_value;
      if (*threshold_opt) sel.threshold = threshold_value;
      return cmd_select(data_args, solver, sel, in, out, err);
    }
    if (*simulate) {
      return cmd_simulate(config_path, sim_out, *workers_opt ? std::optional<int>(workers_value) : std::nullopt, out);
    }
    if (*generate) return cmd_generate(gen_config, gen_rep, gen_out, out);
  } catch (const InvalidArgument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return UsageError;
  } catch (const DegenerateGridError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return NumericalFailure;
  } catch (const NumericalError& e) {
    fmt::print(err, "numerical failure: {}\n", e.what());
    return NumericalFailure;
  } catch (const fs::filesystem_error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return UsageError;
  }
  return UsageError;
}

}  // namespace koreg::cli
