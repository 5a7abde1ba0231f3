#pragma once

// Test-only oracles, kept independent of the implementation paths they
// check: the pmf here goes through lgamma, not the product identity, and
// expectations come from plain enumeration.

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include <Eigen/Core>

#include "nbreg/model.hpp"
#include "nbreg/pmf.hpp"
#include "nbreg/sample.hpp"

namespace oracles {

inline double log_pmf_lgamma(long y, double mu, double kappa) {
  const double inv_kappa = 1.0 / kappa;
  const double t = kappa * mu;
  return std::lgamma(y + inv_kappa) - std::lgamma(inv_kappa) - std::lgamma(y + 1.0) +
         y * (std::log(t) - std::log1p(t)) - inv_kappa * std::log1p(t);
}

inline double pmf(long y, double mu, double kappa) {
  return std::exp(log_pmf_lgamma(y, mu, kappa));
}

// sum_y f(y) pmf(y), enumerated until the tail mass is below tol and the
// partial sums have stabilized.
inline double brute_force_expectation(const std::function<double(long)>& f, double mu,
                                      double kappa, double tol = 1e-13,
                                      long cap = 2000000) {
  double total = 0.0;
  double mass = 0.0;
  long stable = 0;
  for (long y = 0; y < cap; ++y) {
    const double p = pmf(y, mu, kappa);
    total += f(y) * p;
    mass += p;
    const bool tail_done = (1.0 - mass) < tol;
    const bool term_small = std::abs(f(y) * p) <= tol * (std::abs(total) + 1.0);
    if (tail_done && term_small) {
      if (++stable > 4) return total;
    } else {
      stable = 0;
    }
  }
  throw std::runtime_error("brute-force expectation did not converge");
}

// Partial sums S_a(y) = sum_{j<y} j^a / (kappa j + 1)^a.
inline double partial_sum(long y, double kappa, int a) {
  double s = 0.0;
  for (long j = 1; j < y; ++j) s += std::pow(j / (kappa * j + 1.0), a);
  return s;
}

// Dispersion score of one observation on the kappa scale (m = 1).
inline double u_kappa(long y, double mu, double kappa) {
  const double t = kappa * mu;
  return partial_sum(y, kappa, 1) - mu * y / (1.0 + t) +
         ((1.0 + t) * std::log1p(t) - t) / (kappa * kappa * (1.0 + t));
}

// Second derivative of the single-observation log pmf in kappa.
inline double d2_loglik_kappa(long y, double mu, double kappa) {
  const double t = kappa * mu;
  const double one_t = 1.0 + t;
  return -partial_sum(y, kappa, 2) + y * mu * mu / (one_t * one_t) -
         2.0 * std::log1p(t) / (kappa * kappa * kappa) +
         2.0 * mu / (kappa * kappa * one_t) + mu * mu / (kappa * one_t * one_t);
}

// Central-difference gradient of the log-likelihood in (beta..., phi).
inline Eigen::VectorXd fd_gradient(const nbreg::ModelSpec& spec,
                                   const nbreg::ParameterPoint& theta) {
  const Eigen::Index p = spec.p();
  Eigen::VectorXd grad(p + 1);
  for (Eigen::Index r = 0; r <= p; ++r) {
    const double base = r < p ? theta.beta[r] : theta.phi;
    const double h = 1e-6 * (1.0 + std::abs(base));
    nbreg::ParameterPoint hi = theta;
    nbreg::ParameterPoint lo = theta;
    if (r < p) {
      hi.beta[r] += h;
      lo.beta[r] -= h;
    } else {
      hi.phi += h;
      lo.phi -= h;
    }
    grad[r] = (nbreg::log_likelihood(spec, hi) - nbreg::log_likelihood(spec, lo)) / (2.0 * h);
  }
  return grad;
}

// Random admissible model + parameter point. Identity and sqrt links get
// positive designs and coefficients so every eta stays positive.
struct RandomCase {
  nbreg::ModelSpec spec;
  nbreg::ParameterPoint theta;
};

inline RandomCase random_case(std::mt19937_64& rng, nbreg::Link link,
                              nbreg::DispersionTransform transform) {
  std::uniform_int_distribution<int> n_dist(5, 30);
  std::uniform_int_distribution<int> p_dist(1, 4);
  const int n = n_dist(rng);
  const int p = p_dist(rng);

  RandomCase out;
  out.spec.link = link;
  out.spec.transform = transform;
  out.spec.X.resize(n, p);
  out.theta.beta.resize(p);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (link == nbreg::Link::Log) {
    std::normal_distribution<double> norm(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
      out.spec.X(i, 0) = 1.0;
      for (int j = 1; j < p; ++j) out.spec.X(i, j) = norm(rng);
    }
    out.theta.beta[0] = 0.8 + 0.4 * unit(rng);
    for (int j = 1; j < p; ++j) out.theta.beta[j] = 0.3 * norm(rng);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) out.spec.X(i, j) = 0.5 + unit(rng);
    for (int j = 0; j < p; ++j) out.theta.beta[j] = 0.3 + 0.7 * unit(rng);
  }

  const double kappa0 = 0.3 + 1.2 * unit(rng);
  out.theta.phi = nbreg::phi_from_kappa(transform, kappa0);

  out.spec.m.resize(n);
  out.spec.y.resize(n);
  std::mt19937_64 draw_rng(rng());
  const double weights[3] = {0.5, 1.0, 2.0};
  for (int i = 0; i < n; ++i) {
    out.spec.m[i] = weights[i % 3];
    const double mu = nbreg::link_eval(link, out.spec.X.row(i).dot(out.theta.beta)).mu;
    out.spec.y[i] = static_cast<int>(nbreg::sample_nb(mu, kappa0, draw_rng));
  }
  return out;
}

}  // namespace oracles
