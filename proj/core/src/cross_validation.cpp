#include "koreg/harness.hpp"

#include "koreg/error.hpp"
#include "koreg/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

namespace koreg {

namespace {

std::vector<int> assign_folds(Eigen::Index n, int folds, std::uint64_t seed) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> fold(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < perm.size(); ++i) fold[static_cast<std::size_t>(perm[i])] = static_cast<int>(i % folds);
  return fold;
}

// Every training split must contain every response level, otherwise the
// intercepts of that fit are not identifiable.
bool training_sets_complete(const Dataset& data, const std::vector<int>& fold, int folds) {
  if (data.family().kind() == FamilyKind::Linear) return true;
  const int levels = data.family().levels();
  for (int k = 0; k < folds; ++k) {
    std::vector<char> seen(static_cast<std::size_t>(levels), 0);
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      if (fold[static_cast<std::size_t>(i)] != k) seen[static_cast<std::size_t>(data.y()[i])] = 1;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return false;
  }
  return true;
}

struct CvState {
  Dataset standardized;
  LassoPath full;
  Vector deviance;
};

CvState run_cv(const Dataset& data, int folds, std::uint64_t seed, const SolverOptions& opts) {
  if (folds < 2) throw InvalidArgument(fmt::format("cross-validation needs folds >= 2, got {}", folds));
  if (data.n() < folds) {
    throw InvalidArgument(fmt::format("cannot split {} observations into {} folds", data.n(), folds));
  }
  Dataset z = data.with_design(standardize(data.X()).X);
  LassoPath full = fit_path(z, opts);

  auto fold = assign_folds(z.n(), folds, seed);
  if (!training_sets_complete(z, fold, folds)) {
    fold = assign_folds(z.n(), folds, derive_seed(seed, {1}));
    if (!training_sets_complete(z, fold, folds)) {
      throw InvalidArgument("a cross-validation training split is missing a response level");
    }
  }

  Vector deviance = Vector::Zero(full.grid_size());
  for (int k = 0; k < folds; ++k) {
    std::vector<Eigen::Index> train, test;
    for (Eigen::Index i = 0; i < z.n(); ++i) (fold[static_cast<std::size_t>(i)] == k ? test : train).push_back(i);
    const Dataset tr = z.rows(train);
    const Dataset te = z.rows(test);
    const LassoPath path = fit_path_on_grid(tr, full.lambdas, opts);
    const auto nt = static_cast<double>(te.n());
    for (Eigen::Index g = 0; g < path.grid_size(); ++g) {
      deviance[g] -= nt * mean_log_likelihood(te, path.intercepts.row(g).transpose(), path.coefs.row(g).transpose());
    }
  }
  deviance /= static_cast<double>(z.n());
  return {std::move(z), std::move(full), std::move(deviance)};
}

}  // namespace

Vector cv_deviance(const Dataset& data, int folds, std::uint64_t seed, const SolverOptions& opts, Vector* grid_out) {
  auto state = run_cv(data, folds, seed, opts);
  if (grid_out) *grid_out = state.full.lambdas;
  return state.deviance;
}

std::vector<Eigen::Index> cv_select(const Dataset& data, int folds, std::uint64_t seed, const SolverOptions& opts) {
  const auto state = run_cv(data, folds, seed, opts);
  Eigen::Index best = 0;
  for (Eigen::Index g = 1; g < state.deviance.size(); ++g) {
    if (state.deviance[g] < state.deviance[best]) best = g;
  }
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < state.full.num_coefs(); ++j) {
    if (std::abs(state.full.coefs(best, j)) >= opts.zero_clip) support.push_back(j);
  }
  return support;
}

}  // namespace koreg
