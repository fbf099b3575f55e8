#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace koreg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class FamilyKind { Linear, Logistic, CumulativeLogit };

/// Regression family: link and number of intercept equations.
///
/// Linear and Logistic carry one intercept. CumulativeLogit with K levels
/// models logit P(Y <= k | x) = alpha_k + x'beta for k = 0..K-2, so it
/// carries K-1 ordered intercepts.
class ModelFamily {
 public:
  static ModelFamily linear() { return ModelFamily(FamilyKind::Linear, 0); }
  static ModelFamily logistic() { return ModelFamily(FamilyKind::Logistic, 2); }
  static ModelFamily cumulative_logit(int levels);

  /// Accepts "linear", "logistic", "cumlogit"; levels only matters for cumlogit.
  static ModelFamily parse(std::string_view name, int levels = 3);

  FamilyKind kind() const noexcept { return kind_; }
  int levels() const noexcept { return levels_; }
  int num_intercepts() const noexcept { return kind_ == FamilyKind::CumulativeLogit ? levels_ - 1 : 1; }
  std::string name() const;

  friend bool operator==(const ModelFamily&, const ModelFamily&) = default;

 private:
  ModelFamily(FamilyKind kind, int levels) : kind_(kind), levels_(levels) {}

  FamilyKind kind_;
  int levels_;  // 0 for Linear
};

/// Design matrix, response and family. Validated on construction.
class Dataset {
 public:
  /// Throws InvalidArgument on shape mismatch, non-finite values or
  /// responses outside the family's support.
  Dataset(Matrix X, Vector y, ModelFamily family, std::vector<std::string> names = {});

  const Matrix& X() const noexcept { return X_; }
  const Vector& y() const noexcept { return y_; }
  const ModelFamily& family() const noexcept { return family_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  Eigen::Index n() const noexcept { return X_.rows(); }
  Eigen::Index p() const noexcept { return X_.cols(); }

  /// Human-readable warnings (e.g. an ordinal level with no observations).
  std::vector<std::string> warnings() const;

  /// Same response and family, new design (names reset when widths differ).
  Dataset with_design(Matrix X) const;

  /// Row subset, in the given order.
  Dataset rows(const std::vector<Eigen::Index>& idx) const;

 private:
  Matrix X_;
  Vector y_;
  ModelFamily family_;
  std::vector<std::string> names_;
};

/// Regularization path on a strictly decreasing penalty grid.
struct LassoPath {
  ModelFamily family = ModelFamily::linear();
  Vector lambdas;     // G
  Matrix coefs;       // G x q, penalized coefficients
  Matrix intercepts;  // G x m, unpenalized

  Eigen::Index grid_size() const noexcept { return lambdas.size(); }
  Eigen::Index num_coefs() const noexcept { return coefs.cols(); }
};

struct Standardized {
  Matrix X;
  Vector means;
  Vector scales;
};

/// Center each column and scale to unit standard deviation (divisor n).
/// Throws InvalidArgument naming the first constant column.
Standardized standardize(const Matrix& X);

/// G log-equispaced values from lambda_max down to ratio * lambda_max.
Vector lambda_grid(double lambda_max, int size, double ratio);

}  // namespace koreg
