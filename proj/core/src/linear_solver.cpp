#include "solver_detail.hpp"

#include "koreg/error.hpp"

#include <fmt/format.h>

#include <vector>

namespace koreg::detail {

CenteredDesign center(const Matrix& X) {
  const auto n = static_cast<double>(X.rows());
  CenteredDesign out;
  out.means = X.colwise().mean().transpose();
  out.Xc = X.rowwise() - out.means.transpose();
  out.sq_norms = out.Xc.colwise().squaredNorm().transpose() / n;
  return out;
}

namespace {

// Naive-update coordinate descent on (1/2n)||yc - Xc b||^2 + lambda ||b||_1
// with residual r = yc - Xc b maintained in place.
class LinearCd {
 public:
  LinearCd(const CenteredDesign& design, const Vector& yc)
      : X_(design.Xc), sq_(design.sq_norms), yc_(yc), n_(static_cast<double>(yc.size())),
        beta_(Vector::Zero(design.Xc.cols())), r_(yc) {}

  const Vector& beta() const noexcept { return beta_; }

  // One pass over `cols`; returns max |delta_j| * sq_j.
  template <typename Cols>
  double sweep(const Cols& cols, double lambda) {
    double max_change = 0.0;
    for (Eigen::Index j : cols) {
      const double a = sq_[j];
      if (a <= 0.0) continue;
      const double old = beta_[j];
      const double z = X_.col(j).dot(r_) / n_ + a * old;
      const double updated = shrink(z, lambda) / a;
      const double delta = updated - old;
      if (delta != 0.0) {
        r_.noalias() -= delta * X_.col(j);
        beta_[j] = updated;
        max_change = std::max(max_change, a * std::abs(delta));
      }
    }
    return max_change;
  }

  double kkt(double lambda) {
    r_ = yc_ - X_ * beta_;
    const Vector g = X_.transpose() * r_ / n_;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < beta_.size(); ++j) {
      const double v = beta_[j] == 0.0 ? std::max(0.0, std::abs(g[j]) - lambda)
                                       : std::abs(g[j] - lambda * (beta_[j] > 0 ? 1.0 : -1.0));
      worst = std::max(worst, v);
    }
    return worst;
  }

  std::vector<Eigen::Index> active() const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index j = 0; j < beta_.size(); ++j) {
      if (beta_[j] != 0.0) out.push_back(j);
    }
    return out;
  }

 private:
  const Matrix& X_;
  const Vector& sq_;
  const Vector& yc_;
  double n_;
  Vector beta_;
  Vector r_;
};

}  // namespace

LassoPath fit_linear_path(const Dataset& data, const Vector& lambdas, const SolverOptions& opts) {
  const CenteredDesign design = center(data.X());
  const double ymean = data.y().mean();
  const Vector yc = data.y().array() - ymean;
  const Eigen::Index q = data.p();

  std::vector<Eigen::Index> all(static_cast<std::size_t>(q));
  for (Eigen::Index j = 0; j < q; ++j) all[static_cast<std::size_t>(j)] = j;

  LassoPath path;
  path.family = data.family();
  path.lambdas = lambdas;
  path.coefs.resize(lambdas.size(), q);
  path.intercepts.resize(lambdas.size(), 1);

  LinearCd cd(design, yc);
  for (Eigen::Index g = 0; g < lambdas.size(); ++g) {
    const double lambda = lambdas[g];
    long sweeps = 0;
    auto count = [&] {
      if (++sweeps > opts.max_iter) {
        throw ConvergenceError(lambda, sweeps,
                               fmt::format("linear path did not converge at lambda = {} after {} sweeps", lambda,
                                           opts.max_iter));
      }
    };
    while (true) {
      count();
      const double full = cd.sweep(all, lambda);
      if (full >= opts.tol) {
        const auto act = cd.active();
        while (true) {
          count();
          if (cd.sweep(act, lambda) < opts.tol) break;
        }
        continue;
      }
      if (cd.kkt(lambda) <= opts.tol) break;
    }
    path.coefs.row(g) = cd.beta().transpose();
    path.intercepts(g, 0) = ymean - design.means.dot(cd.beta());
  }
  return path;
}

}  // namespace koreg::detail
