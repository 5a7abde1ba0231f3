#pragma once

#include <Eigen/Core>
#include <Eigen/QR>

#include "nbreg/model.hpp"

namespace nbreg {

// QR factorization of W^(1/2) X. All applications of (X'WX)^-1 go through
// this factor; the explicit p x p inverse is only formed for variance
// reporting. Throws RankError when the weighted design loses column rank.
class DesignFactor {
 public:
  DesignFactor(const Eigen::MatrixXd& X, const Eigen::VectorXd& w);

  // Leverages: diagonal of X (X'WX)^-1 X' W. Sums to p, each in [0, 1].
  Eigen::VectorXd hat_values() const;

  // beta minimizing || W^(1/2) (z - X beta) ||.
  Eigen::VectorXd solve_wls(const Eigen::VectorXd& z) const;

  // (X'WX)^-1 v via two triangular solves.
  Eigen::VectorXd apply_info_inverse(const Eigen::VectorXd& v) const;

  // Explicit (X'WX)^-1 (variance reporting only).
  Eigen::MatrixXd info_inverse() const;

  // X'WX.
  Eigen::MatrixXd info() const;

 private:
  const Eigen::MatrixXd& X_;
  Eigen::VectorXd sqrt_w_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

// Leverages for a given design and positive weight vector.
Eigen::VectorXd hat_values(const Eigen::MatrixXd& X, const Eigen::VectorXd& w);

// Per-observation state at a parameter point. All length-n vectors.
struct WorkingQuantities {
  Eigen::VectorXd eta;     // X beta
  Eigen::VectorXd mu;      // g^-1(eta)
  Eigen::VectorXd d;       // dmu/deta
  Eigen::VectorXd dprime;  // d2mu/deta2
  Eigen::VectorXd v;       // mu + kappa mu^2
  Eigen::VectorXd vprime;  // 1 + 2 kappa mu
  Eigen::VectorXd w;       // m d^2 / v
  Eigen::VectorXd h;       // leverages
  Eigen::VectorXd xi;      // h dprime / (2 d w)
  double kappa = 0.0;
  double kprime = 0.0;
  double kdoubleprime = 0.0;
};

WorkingQuantities working_quantities(const ModelSpec& spec, const ParameterPoint& theta);

}  // namespace nbreg
