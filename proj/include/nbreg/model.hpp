#pragma once

#include <Eigen/Core>

#include "nbreg/dispersion.hpp"
#include "nbreg/link.hpp"

namespace nbreg {

// Count-regression model data: response counts y, design X, prior weights m.
// Mean structure mu_i = g^-1(x_i' beta), variance mu_i + kappa mu_i^2.
struct ModelSpec {
  Eigen::VectorXi y;   // nonnegative counts, length n
  Eigen::MatrixXd X;   // n x p design; full column rank checked at fit time
  Eigen::VectorXd m;   // positive prior weights, length n
  Link link = Link::Log;
  DispersionTransform transform = DispersionTransform::Identity;

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return X.cols(); }

  // Shape and sign checks (n >= p >= 1, y_i >= 0, m_i > 0). Rank is not
  // checked here; the weighted factorization does that at fit time.
  void validate() const;
};

struct ParameterPoint {
  Eigen::VectorXd beta;
  double phi = 0.0;
};

}  // namespace nbreg
