#pragma once

#include "koreg/model.hpp"

#include <cmath>

namespace koreg::detail {

inline double sigmoid(double x) noexcept {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double softplus(double x) noexcept { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

/// Log-likelihood of the binary and cumulative-logit families as a function
/// of the intercepts and the linear predictor eta = X beta (intercepts excluded).
///
/// Logistic:  logit P(Y = 1) = alpha + eta.
/// Cumulative: logit P(Y <= k) = alpha_k + eta, k = 0..K-2.
class GlmLikelihood {
 public:
  explicit GlmLikelihood(const Dataset& data);

  int num_intercepts() const noexcept { return m_; }

  /// Strictly increasing and finite.
  bool feasible(const Vector& alpha) const;

  /// Summed log-likelihood; optionally the first and negated second
  /// derivatives in eta per observation, the gradient / negated Hessian in
  /// alpha, and the negated mixed derivatives (m x n, alpha_k by eta_i).
  double evaluate(const Vector& alpha, const Vector& eta, Vector* d = nullptr, Vector* w = nullptr,
                  Vector* grad_alpha = nullptr, Matrix* neg_hess_alpha = nullptr, Matrix* cross = nullptr) const;

  /// Closed-form intercept-only MLE. Throws NumericalError when a level is empty.
  Vector null_intercepts() const;

 private:
  const Vector& y_;
  bool logistic_;
  int levels_;
  int m_;
};

}  // namespace koreg::detail
