#pragma once

#include "koreg/model.hpp"
#include "koreg/solvers.hpp"

#include <cstdint>
#include <vector>

namespace koreg {

/// Row-permuted copy of a design matrix.
struct Knockoffs {
  Matrix X_tilde;
  std::vector<Eigen::Index> permutation;  // X_tilde.row(i) == X.row(permutation[i])
};

/// Everything produced by one knockoff draw.
struct KnockoffRun {
  std::uint64_t seed = 0;
  std::vector<Eigen::Index> permutation;
  Matrix X_tilde;
  Vector T;        // entry penalties of the original covariates
  Vector T_tilde;  // entry penalties of their knockoffs
  Vector W;        // signed statistics
};

/// Uniform permutation of the rows of X, deterministic in seed.
Knockoffs make_knockoffs(const Matrix& X, std::uint64_t seed);

/// Applies an explicit row permutation.
Knockoffs apply_permutation(const Matrix& X, std::vector<Eigen::Index> permutation);

/// max(T, T_tilde), positive only when the covariate strictly precedes its knockoff.
double signed_statistic(double T, double T_tilde) noexcept;
Vector signed_statistics(const Vector& T, const Vector& T_tilde);

/// Standardizes [X, X_tilde], fits the augmented path and computes W.
KnockoffRun knockoff_statistics(const Dataset& data, const SolverOptions& opts, std::uint64_t seed);

/// Sample correlation matrix (divisor n). Rows are accumulated in
/// lexicographic order, so the result depends only on the row multiset and
/// is bit-identical for any row permutation.
Matrix sample_correlation(const Matrix& X);

/// Indices i with W[i] >= s. Throws InvalidArgument for s <= 0.
std::vector<Eigen::Index> select(const Vector& W, double s);

/// Covariates with positive W, most important first (ties by index).
std::vector<Eigen::Index> importance_order(const Vector& W);

}  // namespace koreg
