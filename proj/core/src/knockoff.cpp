#include "koreg/knockoff.hpp"

#include "koreg/error.hpp"
#include "koreg/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

namespace koreg {

Knockoffs apply_permutation(const Matrix& X, std::vector<Eigen::Index> permutation) {
  if (static_cast<Eigen::Index>(permutation.size()) != X.rows()) {
    throw InvalidArgument(fmt::format("permutation of length {} for {} rows", permutation.size(), X.rows()));
  }
  std::vector<char> seen(permutation.size(), 0);
  for (auto i : permutation) {
    if (i < 0 || i >= X.rows() || seen[static_cast<std::size_t>(i)]) {
      throw InvalidArgument("row map is not a permutation");
    }
    seen[static_cast<std::size_t>(i)] = 1;
  }
  Matrix Xt(X.rows(), X.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i) Xt.row(i) = X.row(permutation[static_cast<std::size_t>(i)]);
  return {std::move(Xt), std::move(permutation)};
}

Knockoffs make_knockoffs(const Matrix& X, std::uint64_t seed) {
  if (X.rows() < 2) throw InvalidArgument(fmt::format("knockoffs need at least 2 rows, got {}", X.rows()));
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(X.rows()));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return apply_permutation(X, std::move(perm));
}

double signed_statistic(double T, double T_tilde) noexcept {
  const double magnitude = std::max(T, T_tilde);
  if (T > T_tilde) return magnitude;
  // never-active pair: plain zero, not -0.0
  return magnitude == 0.0 ? 0.0 : -magnitude;
}

Vector signed_statistics(const Vector& T, const Vector& T_tilde) {
  if (T.size() != T_tilde.size()) throw InvalidArgument("T and T_tilde lengths differ");
  Vector W(T.size());
  for (Eigen::Index i = 0; i < T.size(); ++i) W[i] = signed_statistic(T[i], T_tilde[i]);
  return W;
}

KnockoffRun knockoff_statistics(const Dataset& data, const SolverOptions& opts, std::uint64_t seed) {
  const Eigen::Index p = data.p();
  auto ko = make_knockoffs(data.X(), seed);

  Matrix augmented(data.n(), 2 * p);
  augmented << data.X(), ko.X_tilde;
  const auto z = standardize(augmented);
  const auto path = fit_path(data.with_design(z.X), opts);
  const auto entry = entry_lambdas(path, opts.zero_clip);

  KnockoffRun run;
  run.seed = seed;
  run.permutation = std::move(ko.permutation);
  run.X_tilde = std::move(ko.X_tilde);
  run.T = entry.T.head(p);
  run.T_tilde = entry.T.tail(p);
  run.W = signed_statistics(run.T, run.T_tilde);
  return run;
}

Matrix sample_correlation(const Matrix& X) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(X.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (X(a, j) != X(b, j)) return X(a, j) < X(b, j);
    }
    return false;
  });
  Matrix canonical(X.rows(), X.cols());
  for (std::size_t r = 0; r < order.size(); ++r) canonical.row(static_cast<Eigen::Index>(r)) = X.row(order[r]);
  const auto z = standardize(canonical);
  return z.X.transpose() * z.X / static_cast<double>(X.rows());
}

std::vector<Eigen::Index> select(const Vector& W, double s) {
  if (!(s > 0)) throw InvalidArgument(fmt::format("selection threshold must be > 0, got {}", s));
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < W.size(); ++i) {
    if (W[i] >= s) out.push_back(i);
  }
  return out;
}

std::vector<Eigen::Index> importance_order(const Vector& W) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < W.size(); ++i) {
    if (W[i] > 0) out.push_back(i);
  }
  std::stable_sort(out.begin(), out.end(), [&](Eigen::Index a, Eigen::Index b) { return W[a] > W[b]; });
  return out;
}

}  // namespace koreg
