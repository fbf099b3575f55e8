#include "glm_likelihood.hpp"

#include "koreg/error.hpp"

#include <fmt/format.h>

namespace koreg::detail {

GlmLikelihood::GlmLikelihood(const Dataset& data)
    : y_(data.y()),
      logistic_(data.family().kind() == FamilyKind::Logistic),
      levels_(data.family().levels()),
      m_(data.family().num_intercepts()) {
  if (data.family().kind() == FamilyKind::Linear) {
    throw InvalidArgument("GlmLikelihood does not handle the linear family");
  }
}

bool GlmLikelihood::feasible(const Vector& alpha) const {
  if (!alpha.allFinite()) return false;
  for (Eigen::Index k = 1; k < alpha.size(); ++k) {
    if (!(alpha[k] > alpha[k - 1])) return false;
  }
  return true;
}

double GlmLikelihood::evaluate(const Vector& alpha, const Vector& eta, Vector* d, Vector* w, Vector* grad_alpha,
                               Matrix* neg_hess_alpha, Matrix* cross) const {
  const Eigen::Index n = y_.size();
  if (d) d->resize(n);
  if (w) w->resize(n);
  if (grad_alpha) grad_alpha->setZero(m_);
  if (neg_hess_alpha) neg_hess_alpha->setZero(m_, m_);
  if (cross) cross->setZero(m_, n);
  double ll = 0.0;

  if (logistic_) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double lin = alpha[0] + eta[i];
      const double prob = sigmoid(lin);
      ll += y_[i] * lin - softplus(lin);
      const double di = y_[i] - prob;
      const double wi = prob * sigmoid(-lin);
      if (d) (*d)[i] = di;
      if (w) (*w)[i] = wi;
      if (grad_alpha) (*grad_alpha)[0] += di;
      if (neg_hess_alpha) (*neg_hess_alpha)(0, 0) += wi;
      if (cross) (*cross)(0, i) = wi;
    }
    return ll;
  }

  const int top = levels_ - 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int k = static_cast<int>(y_[i]);
    double du = 0, dl = 0, duu = 0, dll = 0, dul = 0;
    if (k == 0) {
      const double u = alpha[0] + eta[i];
      ll += -softplus(-u);
      du = sigmoid(-u);
      duu = -sigmoid(u) * du;
    } else if (k == top) {
      const double l = alpha[top - 1] + eta[i];
      ll += -softplus(l);
      const double sl = sigmoid(l);
      dl = -sl;
      dll = -sl * sigmoid(-l);
    } else {
      const double u = alpha[k] + eta[i];
      const double l = alpha[k - 1] + eta[i];
      const double log_p = -softplus(-u) - softplus(l) + std::log(-std::expm1(l - u));
      ll += log_p;
      const double prob = std::exp(log_p);
      const double su = sigmoid(u), sl = sigmoid(l);
      const double fu = su * sigmoid(-u);
      const double fl = sl * sigmoid(-l);
      du = fu / prob;
      dl = -fl / prob;
      duu = fu * (1.0 - 2.0 * su) / prob - du * du;
      dll = -fl * (1.0 - 2.0 * sl) / prob - dl * dl;
      dul = -du * dl;
    }
    if (d) (*d)[i] = du + dl;
    if (w) (*w)[i] = std::max(0.0, -(duu + 2.0 * dul + dll));
    if (grad_alpha) {
      if (k < top) (*grad_alpha)[k] += du;
      if (k > 0) (*grad_alpha)[k - 1] += dl;
    }
    if (neg_hess_alpha) {
      auto& H = *neg_hess_alpha;
      if (k < top) H(k, k) -= duu;
      if (k > 0) H(k - 1, k - 1) -= dll;
      if (k > 0 && k < top) {
        H(k, k - 1) -= dul;
        H(k - 1, k) -= dul;
      }
    }
    if (cross) {
      if (k < top) (*cross)(k, i) = -(duu + dul);
      if (k > 0) (*cross)(k - 1, i) = -(dul + dll);
    }
  }
  return ll;
}

Vector GlmLikelihood::null_intercepts() const {
  const auto n = static_cast<double>(y_.size());
  std::vector<double> counts(static_cast<std::size_t>(levels_), 0.0);
  for (Eigen::Index i = 0; i < y_.size(); ++i) counts[static_cast<std::size_t>(y_[i])] += 1.0;
  for (int k = 0; k < levels_; ++k) {
    if (counts[static_cast<std::size_t>(k)] == 0.0) {
      throw NumericalError(fmt::format("response level {} has no observations; intercepts are not identifiable", k));
    }
  }
  if (logistic_) {
    const double ybar = counts[1] / n;
    return Vector::Constant(1, std::log(ybar / (1.0 - ybar)));
  }
  Vector alpha(m_);
  double cum = 0.0;
  for (int k = 0; k < m_; ++k) {
    cum += counts[static_cast<std::size_t>(k)];
    alpha[k] = std::log(cum / (n - cum));
  }
  return alpha;
}

}  // namespace koreg::detail
