// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "cli.hpp"
#include "koreg/changepoint.hpp"
#include "koreg/csv.hpp"
#include "koreg/harness.hpp"
#include "koreg/knockoff.hpp"
#include "koreg/rng.hpp"
#include "koreg/solvers.hpp"
#include "support/fixtures.hpp"
#include "support/mle_oracle.hpp"
#include "support/split_oracle.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <unistd.h>

using namespace koreg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;  // 0: no runtime bound
  std::function<Outcome()> check;
};

double soft(double z, double g) { return z > g ? z - g : (z < -g ? z + g : 0.0); }

Outcome solver_correctness() {
  SolverOptions opts;
  Rng meta(7001);
  std::uniform_int_distribution<int> pick_n(5, 50), pick_p(1, 10);
  std::normal_distribution<double> g;
  double worst_kkt = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = pick_n(meta), p = pick_p(meta);
    const Matrix X = testing::gaussian_matrix(n, p, meta());
    Vector y(n);
    const int active = std::min(p, 3);
    for (int i = 0; i < n; ++i) y[i] = X.row(i).head(active).sum() + g(meta);
    const Dataset d(standardize(X).X, y, ModelFamily::linear());
    const auto path = fit_path(d, opts);
    for (Eigen::Index k = 0; k < path.grid_size(); ++k) {
      worst_kkt = std::max(worst_kkt, kkt_violation(d, path.intercepts.row(k).transpose(),
                                                    path.coefs.row(k).transpose(), path.lambdas[k]));
    }
  }

  double worst_soft = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Eigen::Index n = 50, p = 8;
    const Matrix X = testing::orthonormal_design(n, p, seed);
    Rng rng(seed);
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = X(i, 0) - 0.5 * X(i, 3) + 0.2 * X(i, 5) + g(rng);
    const Dataset d(X, y, ModelFamily::linear());
    const auto path = fit_path(d, opts);
    const Vector z = X.transpose() * y / static_cast<double>(n);
    for (Eigen::Index k = 0; k < path.grid_size(); ++k)
      for (Eigen::Index j = 0; j < p; ++j)
        worst_soft = std::max(worst_soft, std::abs(path.coefs(k, j) - soft(z[j], path.lambdas[k])));
  }
  return {worst_kkt <= 10 * opts.tol && worst_soft <= 1e-6,
          fmt::format("max KKT violation {:.3g} (limit {:.3g}); max soft-threshold error {:.3g} (limit 1e-6)",
                      worst_kkt, 10 * opts.tol, worst_soft)};
}

Outcome glm_oracle() {
  Vector beta(3);
  beta << 0.8, -0.5, 0.0;
  double worst = 0.0;
  std::string parts;
  for (const auto& fam : {ModelFamily::logistic(), ModelFamily::cumulative_logit(3)}) {
    const auto d = testing::simulated_dataset(fam, 2000, beta, 4242);
    const auto path = fit_path(d);
    const auto mle = testing::unpenalized_mle(d.X(), d.y(), fam);
    const Eigen::Index last = path.grid_size() - 1;
    double diff = 0.0;
    for (Eigen::Index j = 0; j < 3; ++j) diff = std::max(diff, std::abs(path.coefs(last, j) - mle.coefs[j]));
    for (Eigen::Index k = 0; k < mle.intercepts.size(); ++k)
      diff = std::max(diff, std::abs(path.intercepts(last, k) - mle.intercepts[k]));
    worst = std::max(worst, diff);
    parts += fmt::format("{} max |diff| {:.3g}; ", fam.name(), diff);
  }
  return {worst <= 1e-2, parts + "limit 1e-2"};
}

Outcome changepoint_oracle() {
  int cases = 0, mismatches = 0;
  for (std::size_t m = 2; m <= 8; ++m) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < m; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<int> x(m);
      std::size_t c = code;
      for (std::size_t i = 0; i < m; ++i, c /= 3) x[i] = static_cast<int>(c % 3);
      const std::vector<double> xd(x.begin(), x.end());
      mismatches += dp_breakpoint(xd) != testing::exhaustive_split(x);
      ++cases;
    }
  }
  struct Fixture {
    std::vector<double> x;
    std::size_t b;
  };
  const std::vector<Fixture> cusum = {
      {{0, 0, 0, 10, 10}, 3}, {{10, 10, 0, 0, 0}, 2}, {{4, 4}, 1}, {{1, 1, 1, 9, 9}, 3}, {{2, 2, 2}, 1}};
  int cusum_bad = 0;
  for (const auto& f : cusum) cusum_bad += cusum_breakpoint(f.x) != f.b;
  return {mismatches == 0 && cusum_bad == 0,
          fmt::format("{} sequences, {} DP mismatches; {} CUSUM fixtures, {} wrong", cases, mismatches, cusum.size(),
                      cusum_bad)};
}

std::vector<std::vector<double>> sorted_rows(const Matrix& X) {
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index j = 0; j < X.cols(); ++j) r[static_cast<std::size_t>(j)] = X(i, j);
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

Outcome knockoff_invariants() {
  Rng meta(99);
  std::uniform_int_distribution<int> pick_n(3, 60), pick_p(1, 12);
  int corr_bad = 0, rows_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix X = testing::gaussian_matrix(pick_n(meta), pick_p(meta), meta());
    const auto ko = make_knockoffs(X, meta());
    corr_bad += !(sample_correlation(ko.X_tilde) == sample_correlation(X));
    rows_bad += sorted_rows(ko.X_tilde) != sorted_rows(X);
  }
  const bool signs = signed_statistic(2, 1) == 2.0 && signed_statistic(1, 1) == -1.0 &&
                     signed_statistic(0, 0) == 0.0 && !std::signbit(signed_statistic(0, 0));
  return {corr_bad == 0 && rows_bad == 0 && signs,
          fmt::format("100 matrices: {} correlation mismatches, {} row-multiset mismatches; sign fixtures {}",
                      corr_bad, rows_bad, signs ? "ok" : "wrong")};
}

ExperimentConfig linear_setting(Eigen::Index n, int p, int B, double edge_prob, std::uint64_t seed) {
  ExperimentConfig c;
  c.n = n;
  c.p = p;
  c.B = B;
  c.edge_prob = edge_prob;
  c.beta = block_beta({{1.0, 5}}, p);
  c.base_seed = seed;
  return c;
}

std::vector<ExperimentConfig> with_methods(const ExperimentConfig& base, std::vector<SelectionMethod> methods) {
  std::vector<ExperimentConfig> out;
  for (auto m : methods) {
    auto c = base;
    c.method = m;
    out.push_back(c);
  }
  return out;
}

Outcome relevant_null_breakdown() {
  const auto reports = compare_methods(with_methods(linear_setting(500, 20, 20, 0.0, 1501),
                                                    {SelectionMethod::KnockoffWStats, SelectionMethod::KnockoffGaps}));
  bool pass = true;
  std::string detail;
  for (const auto& r : reports) {
    int covered = 0;
    double nulls = 0;
    for (const auto& sel : r.selections) {
      const auto relevant = std::count_if(sel.begin(), sel.end(), [](Eigen::Index j) { return j < 5; });
      covered += relevant == 5;
      nulls += static_cast<double>(sel.size()) - static_cast<double>(relevant);
    }
    nulls /= static_cast<double>(r.selections.size());
    pass = pass && covered >= 16 && nulls <= 3.0;
    detail += fmt::format("{}: X1..X5 selected in {}/20 runs, {:.2f} nulls on average; ", to_string(r.method), covered,
                          nulls);
  }
  return {pass, detail + "need >= 16/20 and <= 3"};
}

double block_mean(const Vector& rate, Eigen::Index start, Eigen::Index count) {
  return rate.segment(start, count).mean();
}

Outcome desk_replication() {
  auto base = linear_setting(200, 50, 50, 0.2, 321);
  const auto reports =
      compare_methods(with_methods(base, {SelectionMethod::KnockoffWStats, SelectionMethod::KnockoffGaps}));
  bool pass = true;
  std::string detail;
  for (const auto& r : reports) {
    pass = pass && r.mean_relevant_rate >= 0.75 && r.mean_null_rate <= 0.25;
    detail += fmt::format("{}: relevant {:.3f}, null {:.3f}; ", to_string(r.method), r.mean_relevant_rate,
                          r.mean_null_rate);
  }
  return {pass, detail + "need relevant >= 0.75, null <= 0.25"};
}

Outcome cv_direction() {
  auto base = linear_setting(200, 50, 50, 0.2, 321);
  base.family = ModelFamily::logistic();
  const auto reports =
      compare_methods(with_methods(base, {SelectionMethod::CrossValidation, SelectionMethod::KnockoffWStats}));
  const double cv = reports[0].mean_null_rate, ko = reports[1].mean_null_rate;
  return {cv > ko, fmt::format("null rate: cv {:.3f}, stats {:.3f} (relevant: cv {:.3f}, stats {:.3f})", cv, ko,
                               reports[0].mean_relevant_rate, reports[1].mean_relevant_rate)};
}

Outcome monotone_trend() {
  ExperimentConfig c;
  c.n = 300;
  c.p = 200;
  c.B = 20;
  c.edge_prob = 0.2;
  c.beta = block_beta({{5, 10}, {4, 10}, {3, 10}, {2, 10}, {1, 10}}, c.p);
  c.base_seed = 808;
  const auto reports =
      compare_methods(with_methods(c, {SelectionMethod::KnockoffWStats, SelectionMethod::KnockoffGaps}));
  bool pass = true;
  std::string detail;
  for (const auto& r : reports) {
    std::vector<double> means;
    for (int b = 0; b < 5; ++b) means.push_back(block_mean(r.detection_rate, 10 * b, 10));
    for (int b = 1; b < 5; ++b) pass = pass && means[b] <= means[b - 1] + 0.05;
    detail += fmt::format("{}: blocks [{:.2f}] nulls {:.3f}; ", to_string(r.method), fmt::join(means, ", "),
                          r.mean_null_rate);
  }
  return {pass, detail + "slack 0.05 per adjacent pair"};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Every file under dir, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return out;
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / ("koreg_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);

  nlohmann::json sim = {{"name", "determinism"},
                        {"n", 100},
                        {"p", 12},
                        {"B", 4},
                        {"beta_blocks", {{{"value", 1.0}, {"count", 3}}}},
                        {"methods", {"stats", "gaps", "cv"}},
                        {"base_seed", 17},
                        {"folds", 5}};
  std::ofstream(root / "sim.json") << sim.dump();
  for (const char* fam : {"linear", "logistic", "cumlogit"}) {
    auto j = sim;
    j["family"] = fam;
    j["methods"] = {"stats"};
    std::ofstream(root / fmt::format("{}.json", fam)) << j.dump();
  }

  // Commands read configs from {root} and write only inside {run}.
  const std::vector<std::vector<std::string>> commands = {
      {"generate", "{root}/linear.json", "--rep", "2", "--out", "{run}/linear.csv"},
      {"generate", "{root}/logistic.json", "--rep", "1", "--out", "{run}/logistic.csv"},
      {"generate", "{root}/cumlogit.json", "--rep", "0", "--out", "{run}/cumlogit.csv"},
      {"fit", "{run}/linear.csv", "--out", "{run}/fit_linear.csv"},
      {"fit", "{run}/logistic.csv", "--family", "logistic", "--out", "{run}/fit_logistic.csv"},
      {"fit", "{run}/cumlogit.csv", "--family", "cumlogit", "--levels", "3", "--out", "{run}/fit_cumlogit.csv"},
      {"select", "{run}/linear.csv", "--seed", "5", "--method", "stats", "--out", "{run}/sel_stats"},
      {"select", "{run}/logistic.csv", "--family", "logistic", "--seed", "5", "--method", "gaps", "--out",
       "{run}/sel_gaps"},
      {"select", "{run}/cumlogit.csv", "--family", "cumlogit", "--seed", "5", "--method", "manual", "--threshold",
       "0.01", "--out", "{run}/sel_manual"},
      {"simulate", "{root}/sim.json", "--out", "{run}/sim"},
      {"simulate", "{root}/sim.json", "--workers", "3", "--out", "{run}/sim_parallel"},
  };

  auto run_all = [&](const fs::path& run_dir) {
    fs::create_directories(run_dir);
    std::string out_text;
    for (const auto& cmd : commands) {
      std::vector<std::string> args{"koreg"};
      for (auto a : cmd) {
        for (auto [key, val] : {std::pair{"{root}", root.string()}, std::pair{"{run}", run_dir.string()}}) {
          if (auto pos = a.find(key); pos != std::string::npos) a.replace(pos, std::string(key).size(), val);
        }
        args.push_back(a);
      }
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::istringstream in;
      std::ostringstream out, err;
      const int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
      out_text += fmt::format("{} -> {}\n{}{}", cmd[0], code, out.str(), err.str());
    }
    return out_text;
  };

  const auto log_a = run_all(root / "a");
  const auto log_b = run_all(root / "b");
  auto a = snapshot(root / "a"), b = snapshot(root / "b");
  int differing = 0;
  for (const auto& [name, bytes] : a) differing += !b.count(name) || b[name] != bytes;
  differing += static_cast<int>(b.size()) - static_cast<int>(a.size());
  // a parallel simulate must agree with the serial one as well
  for (const char* f : {"report.csv", "comparison.csv", "summary.json"}) {
    differing += a[fmt::format("sim/{}", f)] != a[fmt::format("sim_parallel/{}", f)];
  }
  const bool all_ok = log_a.find("-> 1") == std::string::npos && log_a.find("-> 2") == std::string::npos;
  fs::remove_all(root);
  // 3 datasets, 3 paths, 3 x (wstats, selection), 2 x (report, comparison, summary)
  const std::size_t expected_artifacts = 18;
  return {all_ok && differing == 0 && log_a == log_b && a.size() == expected_artifacts,
          fmt::format("{} commands, {} artifacts compared, {} differ; exit codes {}", commands.size(), a.size(),
                      differing, all_ok ? "all 0" : "nonzero:\n" + log_a)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "solver correctness (KKT, soft-threshold closed form)", 30, solver_correctness},
      {2, "GLM and ordinal solvers vs unpenalized MLE oracle", 60, glm_oracle},
      {3, "change-point DP vs exhaustive split, CUSUM fixtures", 10, changepoint_oracle},
      {4, "knockoff structural invariants and sign rule", 0, knockoff_invariants},
      {5, "breakdown between relevant and null statistics (n=500, p=20)", 120, relevant_null_breakdown},
      {6, "linear p=50 desk-scale replication", 600, desk_replication},
      {7, "cross-validation selects more nulls than knockoffs (logistic)", 900, cv_direction},
      {8, "detection rate monotone in signal strength (p=200)", 900, monotone_trend},
      {9, "CLI determinism", 0, cli_determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_s == 0 || secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    const auto budget = c.budget_s == 0 ? std::string() : fmt::format(" < {:g} s", c.budget_s);
    fmt::print("{} [{}] {}: {} ({:.1f} s{}{})\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail, secs, budget,
               in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
