#include "nbreg/working.hpp"

#include <cmath>

#include "nbreg/errors.hpp"

namespace nbreg {

DesignFactor::DesignFactor(const Eigen::MatrixXd& X, const Eigen::VectorXd& w) : X_(X) {
  if (w.size() != X.rows()) throw InputError("weight length does not match design rows");
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (!(w[i] > 0.0) || !std::isfinite(w[i]))
      throw DomainError("working weights must be positive and finite");
  sqrt_w_ = w.cwiseSqrt();
  qr_.compute(sqrt_w_.asDiagonal() * X);
  if (qr_.rank() < X.cols()) throw RankError("design is rank deficient at the current weights");
}

Eigen::VectorXd DesignFactor::hat_values() const {
  const Eigen::Index n = X_.rows();
  const Eigen::Index p = X_.cols();
  Eigen::MatrixXd thin_q = qr_.householderQ() * Eigen::MatrixXd::Identity(n, p);
  return thin_q.rowwise().squaredNorm();
}

Eigen::VectorXd DesignFactor::solve_wls(const Eigen::VectorXd& z) const {
  return qr_.solve(sqrt_w_.cwiseProduct(z));
}

Eigen::VectorXd DesignFactor::apply_info_inverse(const Eigen::VectorXd& v) const {
  const Eigen::Index p = X_.cols();
  const auto R = qr_.matrixR().topRows(p).triangularView<Eigen::Upper>();
  Eigen::VectorXd t = qr_.colsPermutation().transpose() * v;
  Eigen::VectorXd s = R.transpose().solve(t);
  Eigen::VectorXd x = R.solve(s);
  return qr_.colsPermutation() * x;
}

Eigen::MatrixXd DesignFactor::info_inverse() const {
  const Eigen::Index p = X_.cols();
  Eigen::MatrixXd inv(p, p);
  for (Eigen::Index j = 0; j < p; ++j)
    inv.col(j) = apply_info_inverse(Eigen::VectorXd::Unit(p, j));
  // symmetrize away factorization round-off
  return 0.5 * (inv + inv.transpose());
}

Eigen::MatrixXd DesignFactor::info() const {
  Eigen::MatrixXd wx = sqrt_w_.asDiagonal() * X_;
  return wx.transpose() * wx;
}

Eigen::VectorXd hat_values(const Eigen::MatrixXd& X, const Eigen::VectorXd& w) {
  return DesignFactor(X, w).hat_values();
}

WorkingQuantities working_quantities(const ModelSpec& spec, const ParameterPoint& theta) {
  const Eigen::Index n = spec.n();
  const DispEval disp = disp_eval(spec.transform, theta.phi);

  WorkingQuantities q;
  q.kappa = disp.kappa;
  q.kprime = disp.kprime;
  q.kdoubleprime = disp.kdoubleprime;
  q.eta = spec.X * theta.beta;
  q.mu.resize(n);
  q.d.resize(n);
  q.dprime.resize(n);
  q.v.resize(n);
  q.vprime.resize(n);
  q.w.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const LinkEval le = link_eval(spec.link, q.eta[i]);
    q.mu[i] = le.mu;
    q.d[i] = le.d;
    q.dprime[i] = le.dprime;
    q.v[i] = le.mu + disp.kappa * le.mu * le.mu;
    q.vprime[i] = 1.0 + 2.0 * disp.kappa * le.mu;
    q.w[i] = spec.m[i] * le.d * le.d / q.v[i];
  }
  q.h = hat_values(spec.X, q.w);
  q.xi = q.h.array() * q.dprime.array() / (2.0 * q.d.array() * q.w.array());
  return q;
}

}  // namespace nbreg
