#pragma once

#include "koreg/model.hpp"

#include <cstdint>
#include <vector>

namespace koreg {

/// Gaussian covariate model built on a random conditional-independence graph.
struct CovariateModel {
  int p = 0;
  double edge_prob = 0.0;
  double edge_weight = 0.0;
  double diagonal_shift = 0.0;               // d in Omega = w*A + d*I
  Eigen::MatrixXi adjacency;                 // symmetric 0/1, zero diagonal
  Matrix precision;                          // inverse of sigma
  Matrix sigma;                              // unit-diagonal covariance
};

struct GraphOptions {
  double edge_weight = 0.3;
  double eigen_floor = 0.1;
};

/// Omega = edge_weight * A + d * I, sigma = unit-diagonal rescaling of Omega^-1,
/// precision = sigma^-1 (same zero pattern as A).
CovariateModel precision_from_graph(const Eigen::MatrixXi& adjacency, double edge_weight, double diagonal_shift);

/// Erdos-Renyi graph with independent Bernoulli(edge_prob) edges; d is the
/// smallest shift giving Omega a minimum eigenvalue of eigen_floor.
CovariateModel random_graph_precision(int p, double edge_prob, std::uint64_t seed, const GraphOptions& opts = {});

/// n i.i.d. rows from N(0, sigma) via the Cholesky factor of sigma.
Matrix sample_covariates(const CovariateModel& model, Eigen::Index n, std::uint64_t seed);

struct ResponseSpec {
  ModelFamily family = ModelFamily::linear();
  Vector beta;
  Vector intercepts;      // length num_intercepts(); ignored by Linear except as offset
  double noise_sd = 1.0;  // Linear only
};

/// y drawn from the family's conditional law given X.
Vector simulate_response(const ResponseSpec& spec, const Matrix& X, std::uint64_t seed);

/// Default targets: {1/2} for Logistic (mean P(Y = 1)), {1/3, 2/3} for the
/// 3-level cumulative logit (mean P(Y <= k)); K-level default is k/K.
Vector default_intercept_targets(const ModelFamily& family);

/// Solves mean_i logistic(alpha_k + x_i'beta) = targets[k] for each k.
/// Throws NumericalError when a root is not bracketed in [-50, 50].
Vector auto_intercepts(const ModelFamily& family, const Matrix& X, const Vector& beta, const Vector& targets);

/// beta with `value` repeated `count` times per block, zero-padded to p.
struct BetaBlock {
  double value;
  int count;
};
Vector block_beta(const std::vector<BetaBlock>& blocks, int p);

}  // namespace koreg
