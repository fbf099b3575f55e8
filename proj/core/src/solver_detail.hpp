#pragma once

#include "koreg/model.hpp"
#include "koreg/solvers.hpp"

#include <cmath>

namespace koreg::detail {

inline double soft_threshold(double z, double gamma) noexcept {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

/// Penalties within this relative margin of |z| threshold to zero; keeps the
/// top of the path exactly zero despite last-bit differences between the
/// lambda_max computation and the first sweep.
constexpr double kThresholdSlack = 1e-12;

inline double shrink(double z, double lambda) noexcept {
  return soft_threshold(z, lambda * (1.0 + kThresholdSlack));
}

/// Column-centered copy of X with the removed means.
struct CenteredDesign {
  Matrix Xc;
  Vector means;
  Vector sq_norms;  // ||x_j - mean_j||^2 / n
};
CenteredDesign center(const Matrix& X);

LassoPath fit_linear_path(const Dataset& data, const Vector& lambdas, const SolverOptions& opts);
LassoPath fit_glm_path(const Dataset& data, const Vector& lambdas, const SolverOptions& opts);

}  // namespace koreg::detail
