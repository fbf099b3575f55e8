#include "koreg/changepoint.hpp"
#include "koreg/datagen.hpp"
#include "koreg/harness.hpp"
#include "koreg/knockoff.hpp"
#include "koreg/rng.hpp"
#include "koreg/solvers.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace koreg;

namespace {

Dataset make_data(const ModelFamily& family, Eigen::Index n, int p, std::uint64_t seed) {
  const auto model = random_graph_precision(p, 0.2, seed);
  const Matrix X = standardize(sample_covariates(model, n, seed + 1)).X;
  const Vector beta = block_beta({{1.0, 5}}, p);
  ResponseSpec spec{family, beta, Vector()};
  spec.intercepts = family.kind() == FamilyKind::Linear
                        ? Vector::Zero(1)
                        : auto_intercepts(family, X, beta, default_intercept_targets(family));
  return Dataset(X, simulate_response(spec, X, seed + 2), family);
}

ModelFamily family_of(int code) {
  switch (code) {
    case 0: return ModelFamily::linear();
    case 1: return ModelFamily::logistic();
    default: return ModelFamily::cumulative_logit(3);
  }
}

void BM_FitPath(benchmark::State& state) {
  const auto data = make_data(family_of(static_cast<int>(state.range(0))), 200, static_cast<int>(state.range(1)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(fit_path(data));
  state.SetLabel(data.family().name());
}
BENCHMARK(BM_FitPath)->ArgsProduct({{0, 1, 2}, {50, 100}})->Unit(benchmark::kMillisecond);

void BM_KnockoffStatistics(benchmark::State& state) {
  const auto data = make_data(family_of(static_cast<int>(state.range(0))), 200, 50, 5);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(knockoff_statistics(data, {}, seed++));
  state.SetLabel(data.family().name());
}
BENCHMARK(BM_KnockoffStatistics)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_CrossValidation(benchmark::State& state) {
  const auto data = make_data(ModelFamily::logistic(), 200, 50, 7);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cv_select(data, 10, seed++));
}
BENCHMARK(BM_CrossValidation)->Unit(benchmark::kMillisecond);

void BM_Thresholds(benchmark::State& state) {
  Rng rng(11);
  std::exponential_distribution<double> e;
  Vector W(state.range(0));
  for (auto& v : W) v = e(rng);
  const auto sorted = SortedPositiveW::from(W);
  for (auto _ : state) {
    benchmark::DoNotOptimize(w_threshold(sorted));
    benchmark::DoNotOptimize(gaps_threshold(sorted));
  }
}
BENCHMARK(BM_Thresholds)->Range(16, 4096);

}  // namespace

BENCHMARK_MAIN();
