#include "koreg/datagen.hpp"

#include "koreg/error.hpp"
#include "koreg/rng.hpp"

#include "glm_likelihood.hpp"

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <random>

namespace koreg {

CovariateModel precision_from_graph(const Eigen::MatrixXi& adjacency, double edge_weight, double diagonal_shift) {
  const Eigen::Index p = adjacency.rows();
  if (adjacency.cols() != p) throw InvalidArgument("adjacency matrix must be square");
  Matrix omega = edge_weight * adjacency.cast<double>();
  omega.diagonal().array() += diagonal_shift;

  Eigen::LLT<Matrix> llt(omega);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(fmt::format("Omega is not positive definite with diagonal shift {}", diagonal_shift));
  }
  const Matrix inv = llt.solve(Matrix::Identity(p, p));
  const Vector scale = inv.diagonal().array().sqrt();

  CovariateModel model;
  model.p = static_cast<int>(p);
  model.edge_weight = edge_weight;
  model.diagonal_shift = diagonal_shift;
  model.adjacency = adjacency;
  const Matrix rescaled = scale.cwiseInverse().asDiagonal() * inv * scale.cwiseInverse().asDiagonal();
  model.sigma = 0.5 * (rescaled + rescaled.transpose());
  model.sigma.diagonal().setOnes();
  // Inverse of D^-1/2 Omega^-1 D^-1/2 is D^1/2 Omega D^1/2: exact zero pattern.
  model.precision = scale.asDiagonal() * omega * scale.asDiagonal();
  return model;
}

CovariateModel random_graph_precision(int p, double edge_prob, std::uint64_t seed, const GraphOptions& opts) {
  if (p < 2) throw InvalidArgument(fmt::format("graph needs p >= 2, got {}", p));
  if (!(edge_prob >= 0 && edge_prob <= 1)) {
    throw InvalidArgument(fmt::format("edge probability must lie in [0,1], got {}", edge_prob));
  }
  Rng rng(seed);
  std::bernoulli_distribution edge(edge_prob);
  Eigen::MatrixXi A = Eigen::MatrixXi::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      if (edge(rng)) A(i, j) = A(j, i) = 1;
    }
  }
  const Matrix weighted = opts.edge_weight * A.cast<double>();
  const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(weighted, Eigen::EigenvaluesOnly).eigenvalues()[0];
  auto model = precision_from_graph(A, opts.edge_weight, opts.eigen_floor - min_eig);
  model.edge_prob = edge_prob;
  return model;
}

Matrix sample_covariates(const CovariateModel& model, Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument(fmt::format("sample size must be >= 1, got {}", n));
  Eigen::LLT<Matrix> llt(model.sigma);
  if (llt.info() != Eigen::Success) throw NumericalError("covariance factorization failed");
  const Matrix L = llt.matrixL();
  Rng rng(seed);
  std::normal_distribution<double> gauss;
  Matrix Z(n, model.p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < model.p; ++j) Z(i, j) = gauss(rng);
  }
  return Z * L.transpose();
}

Vector simulate_response(const ResponseSpec& spec, const Matrix& X, std::uint64_t seed) {
  if (spec.beta.size() != X.cols()) {
    throw InvalidArgument(fmt::format("beta has length {} but X has {} columns", spec.beta.size(), X.cols()));
  }
  const auto& family = spec.family;
  const Vector eta = X * spec.beta;
  Rng rng(seed);
  Vector y(X.rows());

  switch (family.kind()) {
    case FamilyKind::Linear: {
      if (!(spec.noise_sd > 0)) throw InvalidArgument("noise_sd must be positive");
      const double offset = spec.intercepts.size() > 0 ? spec.intercepts[0] : 0.0;
      std::normal_distribution<double> noise(0.0, spec.noise_sd);
      for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = offset + eta[i] + noise(rng);
      break;
    }
    case FamilyKind::Logistic: {
      if (spec.intercepts.size() != 1) throw InvalidArgument("logistic response needs exactly one intercept");
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        y[i] = unif(rng) < detail::sigmoid(spec.intercepts[0] + eta[i]) ? 1.0 : 0.0;
      }
      break;
    }
    case FamilyKind::CumulativeLogit: {
      const int m = family.num_intercepts();
      if (spec.intercepts.size() != m) {
        throw InvalidArgument(fmt::format("cumulative logit needs {} intercepts, got {}", m, spec.intercepts.size()));
      }
      for (int k = 1; k < m; ++k) {
        if (!(spec.intercepts[k] > spec.intercepts[k - 1])) {
          throw InvalidArgument("cumulative probabilities must increase: intercepts are not strictly increasing");
        }
      }
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double u = unif(rng);
        int level = m;
        for (int k = 0; k < m; ++k) {
          if (u < detail::sigmoid(spec.intercepts[k] + eta[i])) {
            level = k;
            break;
          }
        }
        y[i] = level;
      }
      break;
    }
  }
  return y;
}

Vector default_intercept_targets(const ModelFamily& family) {
  switch (family.kind()) {
    case FamilyKind::Linear: return Vector();
    case FamilyKind::Logistic: return Vector::Constant(1, 0.5);
    case FamilyKind::CumulativeLogit: {
      Vector t(family.num_intercepts());
      for (int k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k + 1) / family.levels();
      return t;
    }
  }
  return Vector();
}

Vector auto_intercepts(const ModelFamily& family, const Matrix& X, const Vector& beta, const Vector& targets) {
  if (family.kind() == FamilyKind::Linear) return Vector::Zero(1);
  if (targets.size() != family.num_intercepts()) {
    throw InvalidArgument(fmt::format("{} intercept targets for {} intercepts", targets.size(),
                                      family.num_intercepts()));
  }
  for (Eigen::Index k = 0; k < targets.size(); ++k) {
    if (!(targets[k] > 0 && targets[k] < 1) || (k > 0 && !(targets[k] > targets[k - 1]))) {
      throw InvalidArgument("intercept targets must be strictly increasing probabilities in (0,1)");
    }
  }
  const Vector eta = X * beta;
  auto mean_prob = [&](double a) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) s += detail::sigmoid(a + eta[i]);
    return s / static_cast<double>(eta.size());
  };
  constexpr double kBound = 50.0;
  Vector alpha(targets.size());
  for (Eigen::Index k = 0; k < targets.size(); ++k) {
    const double t = targets[k];
    auto f = [&](double a) { return mean_prob(a) - t; };
    const double lo = f(-kBound), hi = f(kBound);
    if (!(lo < 0 && hi > 0)) {
      throw NumericalError(fmt::format("intercept for target {} is not bracketed in [-{}, {}]", t, kBound, kBound));
    }
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(f, -kBound, kBound, lo, hi,
                                                          boost::math::tools::eps_tolerance<double>(52), iters);
    alpha[k] = 0.5 * (a + b);
  }
  return alpha;
}

Vector block_beta(const std::vector<BetaBlock>& blocks, int p) {
  Vector beta = Vector::Zero(p);
  int at = 0;
  for (const auto& blk : blocks) {
    if (blk.count < 0 || at + blk.count > p) throw InvalidArgument("coefficient blocks exceed p");
    beta.segment(at, blk.count).setConstant(blk.value);
    at += blk.count;
  }
  return beta;
}

}  // namespace koreg
