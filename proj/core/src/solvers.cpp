#include "koreg/solvers.hpp"

#include "glm_likelihood.hpp"
#include "solver_detail.hpp"

#include "koreg/error.hpp"

#include <fmt/format.h>

namespace koreg {

void SolverOptions::validate() const {
  if (!(tol > 0)) throw InvalidArgument(fmt::format("solver tol must be > 0, got {}", tol));
  if (!(zero_clip >= tol)) {
    throw InvalidArgument(fmt::format("zero_clip ({}) must be >= tol ({})", zero_clip, tol));
  }
  if (max_iter < 1) throw InvalidArgument(fmt::format("max_iter must be >= 1, got {}", max_iter));
  if (grid_size < 2) throw InvalidArgument(fmt::format("grid_size must be >= 2, got {}", grid_size));
  if (!(grid_ratio > 0 && grid_ratio < 1)) {
    throw InvalidArgument(fmt::format("grid_ratio must lie in (0,1), got {}", grid_ratio));
  }
}

Vector null_intercepts(const Dataset& data) {
  if (data.family().kind() == FamilyKind::Linear) return Vector::Constant(1, data.y().mean());
  return detail::GlmLikelihood(data).null_intercepts();
}

double lambda_max(const Dataset& data) {
  const auto design = detail::center(data.X());
  const auto n = static_cast<double>(data.n());
  Vector resid;
  if (data.family().kind() == FamilyKind::Linear) {
    resid = data.y().array() - data.y().mean();
  } else {
    detail::GlmLikelihood lik(data);
    lik.evaluate(lik.null_intercepts(), Vector::Zero(data.n()), &resid);
  }
  return (design.Xc.transpose() * resid).cwiseAbs().maxCoeff() / n;
}

LassoPath fit_path_on_grid(const Dataset& data, const Vector& lambdas, const SolverOptions& opts) {
  opts.validate();
  if (lambdas.size() < 1) throw InvalidArgument("empty penalty grid");
  for (Eigen::Index g = 0; g < lambdas.size(); ++g) {
    if (!(lambdas[g] > 0) || (g > 0 && !(lambdas[g] < lambdas[g - 1]))) {
      throw InvalidArgument("penalty grid must be positive and strictly decreasing");
    }
  }
  if (data.family().kind() == FamilyKind::Linear) return detail::fit_linear_path(data, lambdas, opts);
  return detail::fit_glm_path(data, lambdas, opts);
}

LassoPath fit_path(const Dataset& data, const SolverOptions& opts) {
  opts.validate();
  const double top = lambda_max(data);
  const double scale = std::max(1.0, data.y().cwiseAbs().maxCoeff());
  if (!(top > 1e-12 * scale)) {
    throw DegenerateGridError(fmt::format("lambda_max = {}: no covariate is correlated with the response", top));
  }
  return fit_path_on_grid(data, lambda_grid(top, opts.grid_size, opts.grid_ratio), opts);
}

EntryStatistics entry_lambdas(const LassoPath& path, double zero_clip) {
  EntryStatistics out{Vector::Zero(path.num_coefs()), path.lambdas};
  for (Eigen::Index j = 0; j < path.num_coefs(); ++j) {
    for (Eigen::Index g = 0; g < path.grid_size(); ++g) {
      if (std::abs(path.coefs(g, j)) >= zero_clip) {
        out.T[j] = path.lambdas[g];
        break;
      }
    }
  }
  return out;
}

namespace {

// Gradient of the (1/n) log-likelihood in (alpha, beta).
void mean_gradient(const Dataset& data, const Vector& intercepts, const Vector& coefs, Vector& g_alpha,
                   Vector& g_beta) {
  const auto n = static_cast<double>(data.n());
  const Vector eta = data.X() * coefs;
  Vector resid;
  if (data.family().kind() == FamilyKind::Linear) {
    resid = data.y() - eta - Vector::Constant(data.n(), intercepts[0]);
    g_alpha = Vector::Constant(1, resid.sum() / n);
  } else {
    detail::GlmLikelihood lik(data);
    lik.evaluate(intercepts, eta, &resid, nullptr, &g_alpha, nullptr);
    g_alpha /= n;
  }
  g_beta = data.X().transpose() * resid / n;
}

}  // namespace

double kkt_violation(const Dataset& data, const Vector& intercepts, const Vector& coefs, double lambda) {
  Vector ga, gb;
  mean_gradient(data, intercepts, coefs, ga, gb);
  double worst = ga.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < coefs.size(); ++j) {
    const double b = coefs[j];
    const double v = b == 0.0 ? std::max(0.0, std::abs(gb[j]) - lambda)
                              : std::abs(gb[j] - lambda * (b > 0 ? 1.0 : -1.0));
    worst = std::max(worst, v);
  }
  return worst;
}

double mean_log_likelihood(const Dataset& data, const Vector& intercepts, const Vector& coefs) {
  const auto n = static_cast<double>(data.n());
  const Vector eta = data.X() * coefs;
  if (data.family().kind() == FamilyKind::Linear) {
    return -0.5 * (data.y() - eta - Vector::Constant(data.n(), intercepts[0])).squaredNorm() / n;
  }
  return detail::GlmLikelihood(data).evaluate(intercepts, eta) / n;
}

}  // namespace koreg
