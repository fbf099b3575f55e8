#include "koreg/model.hpp"

#include "koreg/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace koreg {

ModelFamily ModelFamily::cumulative_logit(int levels) {
  if (levels < 3) {
    throw InvalidArgument(fmt::format("cumulative logit needs at least 3 levels, got {}", levels));
  }
  return ModelFamily(FamilyKind::CumulativeLogit, levels);
}

ModelFamily ModelFamily::parse(std::string_view name, int levels) {
  if (name == "linear") return linear();
  if (name == "logistic") return logistic();
  if (name == "cumlogit" || name == "cumulative_logit") return cumulative_logit(levels);
  throw InvalidArgument(fmt::format("unknown family '{}' (expected linear, logistic or cumlogit)", name));
}

std::string ModelFamily::name() const {
  switch (kind_) {
    case FamilyKind::Linear: return "linear";
    case FamilyKind::Logistic: return "logistic";
    case FamilyKind::CumulativeLogit: return "cumlogit";
  }
  return "unknown";
}

namespace {

bool is_level(double v, int levels) {
  return v >= 0 && v < levels && v == std::floor(v);
}

}  // namespace

Dataset::Dataset(Matrix X, Vector y, ModelFamily family, std::vector<std::string> names)
    : X_(std::move(X)), y_(std::move(y)), family_(family), names_(std::move(names)) {
  if (X_.rows() < 2) throw InvalidArgument(fmt::format("dataset needs n >= 2 rows, got {}", X_.rows()));
  if (X_.cols() < 1) throw InvalidArgument("dataset needs at least one covariate");
  if (y_.size() != X_.rows()) {
    throw InvalidArgument(fmt::format("response length {} does not match {} design rows", y_.size(), X_.rows()));
  }
  if (!X_.allFinite()) throw InvalidArgument("design matrix contains non-finite values");
  if (!y_.allFinite()) throw InvalidArgument("response contains non-finite values");
  if (family_.kind() != FamilyKind::Linear) {
    for (Eigen::Index i = 0; i < y_.size(); ++i) {
      if (!is_level(y_[i], family_.levels())) {
        throw InvalidArgument(fmt::format("response row {} = {} is not a level in 0..{}", i + 1, y_[i],
                                          family_.levels() - 1));
      }
    }
  }
  if (names_.empty()) {
    names_.reserve(static_cast<std::size_t>(X_.cols()));
    for (Eigen::Index j = 0; j < X_.cols(); ++j) names_.push_back(fmt::format("X{}", j + 1));
  } else if (static_cast<Eigen::Index>(names_.size()) != X_.cols()) {
    throw InvalidArgument(fmt::format("{} covariate names for {} columns", names_.size(), X_.cols()));
  }
}

std::vector<std::string> Dataset::warnings() const {
  std::vector<std::string> out;
  if (family_.kind() == FamilyKind::Linear) return out;
  std::vector<int> counts(static_cast<std::size_t>(family_.levels()), 0);
  for (Eigen::Index i = 0; i < y_.size(); ++i) ++counts[static_cast<std::size_t>(y_[i])];
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) out.push_back(fmt::format("response level {} has no observations", k));
  }
  return out;
}

Dataset Dataset::with_design(Matrix X) const {
  if (X.cols() == X_.cols()) return Dataset(std::move(X), y_, family_, names_);
  return Dataset(std::move(X), y_, family_);
}

Dataset Dataset::rows(const std::vector<Eigen::Index>& idx) const {
  Matrix X(static_cast<Eigen::Index>(idx.size()), X_.cols());
  Vector y(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    X.row(static_cast<Eigen::Index>(r)) = X_.row(idx[r]);
    y[static_cast<Eigen::Index>(r)] = y_[idx[r]];
  }
  return Dataset(std::move(X), std::move(y), family_, names_);
}

Standardized standardize(const Matrix& X) {
  const auto n = static_cast<double>(X.rows());
  Standardized out{X, Vector(X.cols()), Vector(X.cols())};
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double mean = X.col(j).sum() / n;
    auto col = out.X.col(j);
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / n);
    // Relative test so that columns of large magnitude with rounding noise still count as constant.
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
      throw InvalidArgument(fmt::format("constant column {}", j));
    }
    col /= sd;
    out.means[j] = mean;
    out.scales[j] = sd;
  }
  return out;
}

Vector lambda_grid(double lambda_max, int size, double ratio) {
  if (!(lambda_max > 0) || !std::isfinite(lambda_max)) {
    throw InvalidArgument(fmt::format("lambda_max must be positive and finite, got {}", lambda_max));
  }
  if (size < 2) throw InvalidArgument(fmt::format("grid size must be >= 2, got {}", size));
  if (!(ratio > 0 && ratio < 1)) throw InvalidArgument(fmt::format("grid ratio must lie in (0,1), got {}", ratio));
  Vector grid(size);
  const double step = std::log(ratio) / (size - 1);
  for (int g = 0; g < size; ++g) grid[g] = lambda_max * std::exp(step * g);
  grid[0] = lambda_max;
  return grid;
}

}  // namespace koreg
