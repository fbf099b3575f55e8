#include "support/fixtures.hpp"

#include "koreg/rng.hpp"

#include <Eigen/QR>

#include <random>

namespace koreg::testing {

Matrix gaussian_matrix(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g;
  Matrix X(n, p);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = g(rng);
  return X;
}

Matrix orthonormal_design(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  Matrix Z(n, p + 1);
  Z.col(0).setOnes();
  Z.rightCols(p) = gaussian_matrix(n, p, seed);
  Eigen::HouseholderQR<Matrix> qr(Z);
  const Matrix Q = qr.householderQ() * Matrix::Identity(n, p + 1);
  return Q.rightCols(p) * std::sqrt(static_cast<double>(n));
}

Dataset simulated_dataset(const ModelFamily& family, Eigen::Index n, const Vector& beta, std::uint64_t seed) {
  Matrix X = standardize(gaussian_matrix(n, beta.size(), derive_seed(seed, {1}))).X;
  ResponseSpec spec;
  spec.family = family;
  spec.beta = beta;
  spec.intercepts = auto_intercepts(family, X, beta, default_intercept_targets(family));
  Vector y = simulate_response(spec, X, derive_seed(seed, {2}));
  return Dataset(std::move(X), std::move(y), family);
}

}  // namespace koreg::testing
