#include "nbreg/pmf.hpp"

#include <cmath>

#include "nbreg/errors.hpp"
#include "nbreg/num_util.hpp"

namespace nbreg {

double nb_log_pmf(long y, double mu, double kappa) {
  if (y < 0) throw DomainError("count must be nonnegative");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be positive");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("mu must be positive");
  mu = std::max(mu, kMuFloor);

  detail::KahanSum gamma_ratio;
  for (long j = 0; j < y; ++j) gamma_ratio.add(std::log1p(kappa * j));

  const double t = kappa * mu;
  double value = gamma_ratio.value();
  value -= std::lgamma(static_cast<double>(y) + 1.0);
  value += static_cast<double>(y) * (std::log(mu) - std::log1p(t));
  value -= std::log1p(t) / kappa;
  return value;
}

double log_likelihood(const ModelSpec& spec, const ParameterPoint& theta) {
  const double kappa = disp_eval(spec.transform, theta.phi).kappa;
  const Eigen::VectorXd eta = spec.X * theta.beta;
  detail::KahanSum total;
  for (Eigen::Index i = 0; i < spec.n(); ++i) {
    const double mu = link_eval(spec.link, eta[i]).mu;
    total.add(spec.m[i] * nb_log_pmf(spec.y[i], mu, kappa));
  }
  return total.value();
}

}  // namespace nbreg
