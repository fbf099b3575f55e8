#include "glm_likelihood.hpp"
#include "solver_detail.hpp"

#include "koreg/error.hpp"

#include <fmt/format.h>

#include <vector>

namespace koreg::detail {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

double l1(const Vector& v) { return v.lpNorm<1>(); }

// Proximal-Newton path solver. Each outer step builds the quadratic model
// of the log-likelihood in (alpha, beta) jointly, solves the weighted lasso
// on it by coordinate descent (with an exact block update for the
// intercepts) and backtracks on the penalized objective. Updating the
// intercepts separately would converge only linearly once the fit gets
// close to separating the classes.
class GlmPathSolver {
 public:
  GlmPathSolver(const Dataset& data, const SolverOptions& opts)
      : lik_(data), design_(center(data.X())), opts_(opts), n_(static_cast<double>(data.n())),
        q_(data.p()), alpha_(lik_.null_intercepts()), beta_(Vector::Zero(q_)), eta_(Vector::Zero(data.n())) {}

  void solve(double lambda) {
    lambda_ = lambda;
    sweeps_ = 0;
    while (true) {
      eta_.noalias() = design_.Xc * beta_;
      const double ll = lik_.evaluate(alpha_, eta_, &d_, &w_, &ga_, &haa_, &cross_);
      const double viol = violation();
      if (viol <= opts_.tol) return;
      newton_step(ll, std::max(0.1 * opts_.tol, 1e-2 * viol));
    }
  }

  const Vector& beta() const noexcept { return beta_; }
  Vector intercepts() const { return alpha_.array() - design_.means.dot(beta_); }

 private:
  void tick() {
    if (++sweeps_ > opts_.max_iter) {
      throw ConvergenceError(lambda_, sweeps_,
                             fmt::format("GLM path did not converge at lambda = {} after {} sweeps", lambda_,
                                         opts_.max_iter));
    }
  }

  // Distance of the (1/n)-gradient from the subdifferential.
  double violation() {
    grad_.noalias() = design_.Xc.transpose() * d_;
    grad_ /= n_;
    double worst = ga_.cwiseAbs().maxCoeff() / n_;
    for (Eigen::Index j = 0; j < q_; ++j) {
      const double b = beta_[j];
      const double v = b == 0.0 ? std::max(0.0, std::abs(grad_[j]) - lambda_)
                                : std::abs(grad_[j] - lambda_ * (b > 0 ? 1.0 : -1.0));
      worst = std::max(worst, v);
    }
    return worst;
  }

  template <typename Cols>
  double sweep(const Cols& cols, Vector& target, Vector& s, Vector& u, const Vector& a) {
    double max_change = 0.0;
    for (Eigen::Index j : cols) {
      if (a[j] <= 0.0) continue;
      const double old = target[j];
      const double z = design_.Xc.col(j).dot(s) / n_ + a[j] * old;
      const double updated = shrink(z, lambda_) / a[j];
      const double delta = updated - old;
      if (delta != 0.0) {
        s.noalias() -= delta * w_.cwiseProduct(design_.Xc.col(j));
        u.noalias() += delta * design_.Xc.col(j);
        target[j] = updated;
        max_change = std::max(max_change, a[j] * std::abs(delta));
      }
    }
    return max_change;
  }

  // With the active set and signs fixed, the model is an unconstrained
  // quadratic in (da, beta_A); solve it directly and keep the answer only
  // when the signs survive. Coordinate descent crawls here when the
  // weights are small.
  bool solve_active(const std::vector<Eigen::Index>& act, Vector& target, Vector& da, Vector& s, Vector& u) {
    const auto k = static_cast<Eigen::Index>(act.size());
    const Eigen::Index m = alpha_.size();
    if (k == 0 || k + m >= eta_.size()) return false;
    Matrix XA(eta_.size(), k);
    Vector sigma(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      XA.col(i) = design_.Xc.col(act[static_cast<std::size_t>(i)]);
      sigma[i] = target[act[static_cast<std::size_t>(i)]] > 0 ? 1.0 : -1.0;
    }
    // coefficients leaving the model move to zero
    Vector leave = -beta_;
    for (auto j : act) leave[j] = 0.0;
    const Vector u_leave = design_.Xc * leave;

    Matrix K(m + k, m + k);
    const Matrix CX = cross_ * XA;
    K.topLeftCorner(m, m) = haa_;
    K.topRightCorner(m, k) = CX;
    K.bottomLeftCorner(k, m) = CX.transpose();
    K.bottomRightCorner(k, k).noalias() = XA.transpose() * w_.asDiagonal() * XA;
    Vector rhs(m + k);
    rhs.head(m) = ga_ - cross_ * u_leave;
    rhs.tail(k) = XA.transpose() * (d_ - w_.cwiseProduct(u_leave)) - n_ * lambda_ * sigma;

    const Vector sol = K.ldlt().solve(rhs);
    if (!sol.allFinite() || (K * sol - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) return false;
    Vector next = Vector::Zero(q_);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto j = act[static_cast<std::size_t>(i)];
      next[j] = beta_[j] + sol[m + i];
      if (!(next[j] * sigma[i] > 0)) return false;
    }
    target = next;
    da = sol.head(m);
    u.noalias() = design_.Xc * (target - beta_);
    s = d_ - w_.cwiseProduct(u) - cross_.transpose() * da;
    return true;
  }

  void newton_step(double ll, double inner_tol) {
    // Quadratic model around the current point in the steps (da, delta):
    // working residual s = d - w * u - cross' da with u = X delta.
    const Vector a = (design_.Xc.array().square().colwise() * w_.array()).colwise().sum().transpose() / n_;
    Vector target = beta_;
    Vector s = d_;
    Vector u = Vector::Zero(eta_.size());
    Vector da = Vector::Zero(alpha_.size());
    const bool alpha_curved = (haa_.diagonal().array() > 0).all();
    const auto haa = haa_.ldlt();
    auto alpha_block = [&] {
      if (!alpha_curved) return 0.0;
      const Vector next = haa.solve(ga_ - cross_ * u);
      const Vector change = next - da;
      s.noalias() -= cross_.transpose() * change;
      da = next;
      return (haa_.diagonal().array() * change.array().abs()).maxCoeff() / n_;
    };
    alpha_block();

    std::vector<Eigen::Index> all(static_cast<std::size_t>(q_));
    for (Eigen::Index j = 0; j < q_; ++j) all[static_cast<std::size_t>(j)] = j;
    while (true) {
      tick();
      if (std::max(sweep(all, target, s, u, a), alpha_block()) < inner_tol) break;
      std::vector<Eigen::Index> act;
      for (Eigen::Index j = 0; j < q_; ++j) {
        if (target[j] != 0.0) act.push_back(j);
      }
      if (solve_active(act, target, da, s, u)) continue;
      while (true) {
        tick();
        if (std::max(sweep(act, target, s, u, a), alpha_block()) < inner_tol) break;
      }
    }

    const Vector delta = target - beta_;
    const double pen0 = lambda_ * l1(beta_);
    const double f0 = -ll / n_ + pen0;
    const double decrease = -(ga_.dot(da) + d_.dot(u)) / n_ + lambda_ * l1(target) - pen0;
    // Near the optimum the predicted decrease is below the resolution of the
    // objective, so the full step is taken without comparison.
    if (decrease > -1e-12 * std::max(1.0, std::abs(f0)) && lik_.feasible(alpha_ + da)) {
      alpha_ += da;
      beta_ = target;
      return;
    }
    double t = 1.0;
    for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
      const Vector alpha_trial = alpha_ + t * da;
      if (!lik_.feasible(alpha_trial)) continue;
      const Vector trial = beta_ + t * delta;
      const Vector eta_trial = eta_ + t * u;
      const double f = -lik_.evaluate(alpha_trial, eta_trial) / n_ + lambda_ * l1(trial);
      if (f <= f0 + kArmijo * t * decrease) {
        alpha_ = alpha_trial;
        beta_ = trial;
        return;
      }
    }
    throw NumericalError(fmt::format("line search failed at lambda = {}", lambda_));
  }

  GlmLikelihood lik_;
  CenteredDesign design_;
  const SolverOptions& opts_;
  double n_;
  Eigen::Index q_;
  Vector alpha_;
  Vector beta_;
  Vector eta_;
  Vector d_, w_, grad_, ga_;
  Matrix haa_, cross_;
  double lambda_ = 0.0;
  long sweeps_ = 0;
};

}  // namespace

LassoPath fit_glm_path(const Dataset& data, const Vector& lambdas, const SolverOptions& opts) {
  GlmPathSolver solver(data, opts);
  LassoPath path;
  path.family = data.family();
  path.lambdas = lambdas;
  path.coefs.resize(lambdas.size(), data.p());
  path.intercepts.resize(lambdas.size(), data.family().num_intercepts());
  for (Eigen::Index g = 0; g < lambdas.size(); ++g) {
    solver.solve(lambdas[g]);
    path.coefs.row(g) = solver.beta().transpose();
    path.intercepts.row(g) = solver.intercepts().transpose();
  }
  return path;
}

}  // namespace koreg::detail
