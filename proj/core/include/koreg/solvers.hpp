#pragma once

#include "koreg/model.hpp"

namespace koreg {

struct SolverOptions {
  int grid_size = 100;
  double grid_ratio = 1e-3;
  double tol = 1e-9;         // KKT tolerance on (1/n)-scaled gradients
  long max_iter = 100000;    // coordinate sweeps per grid point
  double zero_clip = 1e-8;   // |beta| below this does not count as entered

  /// Throws InvalidArgument when the invariants (tol > 0, zero_clip >= tol,
  /// max_iter >= 1, grid_size >= 2, ratio in (0,1)) are violated.
  void validate() const;
};

/// Entry penalties of each penalized column; T[i] is a grid value or 0.
struct EntryStatistics {
  Vector T;
  Vector grid;
};

/// Smallest penalty with an all-zero solution, on the (1/n) log-likelihood scale.
double lambda_max(const Dataset& data);

/// Intercept-only maximum-likelihood intercepts for the family.
Vector null_intercepts(const Dataset& data);

/// Warm-started pathwise fit on the grid derived from lambda_max.
/// Throws DegenerateGridError when lambda_max is zero and ConvergenceError
/// when some grid point exceeds max_iter sweeps.
LassoPath fit_path(const Dataset& data, const SolverOptions& opts = {});

/// Same, on a caller-supplied strictly decreasing grid (cross-validation
/// folds reuse the full-data grid).
LassoPath fit_path_on_grid(const Dataset& data, const Vector& lambdas, const SolverOptions& opts = {});

/// T[i] = largest grid lambda at which |beta_i| >= zero_clip, else 0.
EntryStatistics entry_lambdas(const LassoPath& path, double zero_clip = SolverOptions{}.zero_clip);

/// Largest violation of the stationarity conditions at one grid point:
/// max over j of the distance from (1/n) dL/dbeta_j to the subdifferential
/// lambda * d|beta_j|, together with |(1/n) dL/dalpha|.
double kkt_violation(const Dataset& data, const Vector& intercepts, const Vector& coefs, double lambda);

/// (1/n) log-likelihood and its per-observation pieces; shared by the
/// solvers and cross-validation scoring.
double mean_log_likelihood(const Dataset& data, const Vector& intercepts, const Vector& coefs);

}  // namespace koreg
