#include "nbreg/adjust.hpp"

#include <cmath>

#include "nbreg/errors.hpp"
#include "nbreg/num_util.hpp"

namespace nbreg {

namespace {

// Dispersion score contribution of one observation on the kappa scale.
double kappa_score_term(long y, double mu, double kappa) {
  detail::KahanSum s1;
  for (long j = 1; j < y; ++j) s1.add(j / (kappa * j + 1.0));
  const double t = kappa * mu;
  return s1.value() - mu * y / (1.0 + t) +
         detail::log1p_excess(t) / (kappa * kappa * (1.0 + t));
}

double info_kappa_from_tables(const ModelSpec& spec, double kappa,
                              const std::vector<ExpectationTable>& tables) {
  detail::KahanSum acc;
  for (Eigen::Index i = 0; i < spec.n(); ++i) acc.add(spec.m[i] * tables[i].info_kappa_term);
  const long double k2 = static_cast<long double>(kappa) * kappa;
  return static_cast<double>(acc.value_ld() / (k2 * k2));
}

double s_phi_phi_impl(const ModelSpec& spec, const WorkingQuantities& wq,
                      const std::vector<ExpectationTable>& tables) {
  const double kappa = wq.kappa;
  const double k4 = kappa * kappa * kappa * kappa;
  detail::KahanSum sum;
  for (Eigen::Index i = 0; i < spec.n(); ++i) {
    const ExpectationTable& tab = tables[i];
    const double mu = wq.mu[i];
    const double t = kappa * mu;
    const double one_t = 1.0 + t;
    const double bracket = -(2.0 / 3.0) * tab.e_s3 + detail::poly_log_excess(t) / (3.0 * k4) +
                           0.5 * tab.e_s1s2 - 0.5 * mu / one_t * tab.e_s2y +
                           detail::log1p_excess(t) / (2.0 * kappa * kappa * one_t) * tab.e_s2;
    sum.add(spec.m[i] * bracket);
  }
  const double ikk = info_kappa_from_tables(spec, kappa, tables);
  // The sign makes the median dispersion equation transform exactly under
  // kappa reparameterizations; see the equivariance tests.
  return -(wq.kprime * wq.kprime * wq.kprime * sum.value()) -
         0.5 * ikk * wq.kprime * wq.kdoubleprime;
}

// First block of the mean dispersion adjustment; equals half the trace of
// i_bb^-1 R_bb, collapsed to a single sum over observations.
double mean_phi_first_term(const ModelSpec& spec, const WorkingQuantities& wq) {
  detail::KahanSum first;
  for (Eigen::Index i = 0; i < spec.n(); ++i)
    first.add(spec.m[i] * wq.h[i] * wq.d[i] * wq.d[i] * wq.mu[i] * wq.mu[i] /
              (2.0 * wq.w[i] * wq.v[i] * wq.v[i]));
  return wq.kprime * first.value();
}

}  // namespace

ScoreVector score(const ModelSpec& spec, const ParameterPoint& theta) {
  const WorkingQuantities q = working_quantities(spec, theta);
  ScoreVector s;
  s.beta = spec.X.transpose() *
           (q.w.array() * (spec.y.cast<double>().array() - q.mu.array()) / q.d.array()).matrix();
  detail::KahanSum phi_sum;
  for (Eigen::Index i = 0; i < spec.n(); ++i)
    phi_sum.add(spec.m[i] * kappa_score_term(spec.y[i], q.mu[i], q.kappa));
  s.phi = q.kprime * phi_sum.value();
  return s;
}

ExpectedInformation expected_information(const ModelSpec& spec, const ParameterPoint& theta,
                                         const SeriesControl& control) {
  const WorkingQuantities q = working_quantities(spec, theta);
  ExpectedInformation info;
  info.beta_block = spec.X.transpose() * q.w.asDiagonal() * spec.X;
  info.phi_block = q.kprime * q.kprime * info_kappa(q.mu, spec.m, q.kappa, control);
  return info;
}

std::vector<ExpectationTable> per_observation_tables(const Eigen::VectorXd& mu, double kappa,
                                                     const SeriesControl& control) {
  ExpectationCache cache(kappa, control);
  std::vector<ExpectationTable> tables;
  tables.reserve(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) tables.push_back(cache.at(mu[i]));
  return tables;
}

RBlocks r_blocks(const ModelSpec& spec, const ParameterPoint& theta, const WorkingQuantities& wq,
                 const std::vector<ExpectationTable>& tables) {
  (void)theta;
  const Eigen::Index n = spec.n();
  const double kappa = wq.kappa;
  const double k4 = kappa * kappa * kappa * kappa;

  RBlocks blocks;
  Eigen::VectorXd c = (spec.m.array() * wq.d.array().square() * wq.mu.array().square() /
                       wq.v.array().square())
                          .matrix();
  blocks.betabeta = wq.kprime * (spec.X.transpose() * c.asDiagonal() * spec.X);

  Eigen::VectorXd cross(n);
  detail::KahanSum phiphi;
  for (Eigen::Index i = 0; i < n; ++i) {
    const ExpectationTable& tab = tables[i];
    const double mu = wq.mu[i];
    const double t = kappa * mu;
    const double one_t = 1.0 + t;
    cross[i] = wq.d[i] * spec.m[i] / (mu * one_t) *
               (tab.e_s2y - mu * tab.e_s2 - mu * mu * mu / one_t);
    const double bracket = -2.0 * tab.e_s3 + detail::poly_log_excess(t) / k4 +
                           2.0 * tab.e_s1s2 - 2.0 * mu / one_t * tab.e_s2y +
                           2.0 * detail::log1p_excess(t) / (kappa * kappa * one_t) * tab.e_s2;
    phiphi.add(spec.m[i] * bracket);
  }
  blocks.betaphi = wq.kprime * wq.kprime * (spec.X.transpose() * cross);

  const double ikk = info_kappa_from_tables(spec, kappa, tables);
  blocks.phiphi = wq.kprime * wq.kprime * wq.kprime * phiphi.value() +
                  ikk * wq.kprime * wq.kdoubleprime;
  return blocks;
}

double s_phi_phi(const ModelSpec& spec, const ParameterPoint& theta,
                 const std::vector<ExpectationTable>& tables) {
  return s_phi_phi_impl(spec, working_quantities(spec, theta), tables);
}

Eigen::VectorXd u_vector(const ModelSpec& spec, const ParameterPoint& theta,
                         const WorkingQuantities& wq) {
  (void)theta;
  const Eigen::Index p = spec.p();
  const DesignFactor factor(spec.X, wq.w);
  const Eigen::VectorXd bracket =
      (wq.d.array() * wq.vprime.array() / (6.0 * wq.v.array()) -
       wq.dprime.array() / (2.0 * wq.d.array()))
          .matrix();
  Eigen::VectorXd u(p);
  for (Eigen::Index s = 0; s < p; ++s) {
    const Eigen::VectorXd bs = factor.apply_info_inverse(Eigen::VectorXd::Unit(p, s));
    const Eigen::VectorXd xb = spec.X * bs;
    // leverage along the s-th estimated direction
    const Eigen::VectorXd hs = (wq.w.array() * xb.array().square() / bs[s]).matrix();
    u[s] = bs.dot(spec.X.transpose() * hs.cwiseProduct(bracket));
  }
  return u;
}

Adjustment mean_adjustment(const ModelSpec& spec, const ParameterPoint& theta,
                           const SeriesControl& control) {
  const WorkingQuantities wq = working_quantities(spec, theta);
  const std::vector<ExpectationTable> tables = per_observation_tables(wq.mu, wq.kappa, control);
  const RBlocks blocks = r_blocks(spec, theta, wq, tables);
  const double iphiphi = wq.kprime * wq.kprime * info_kappa(wq.mu, spec.m, wq.kappa, control);

  Adjustment adj;
  adj.beta = spec.X.transpose() * wq.w.cwiseProduct(wq.xi);
  adj.phi = mean_phi_first_term(spec, wq) + 0.5 * blocks.phiphi / iphiphi;
  return adj;
}

Adjustment median_adjustment(const ModelSpec& spec, const ParameterPoint& theta,
                             const SeriesControl& control, const Eigen::VectorXd* u_override) {
  const WorkingQuantities wq = working_quantities(spec, theta);
  const std::vector<ExpectationTable> tables = per_observation_tables(wq.mu, wq.kappa, control);
  const RBlocks blocks = r_blocks(spec, theta, wq, tables);
  const double iphiphi = wq.kprime * wq.kprime * info_kappa(wq.mu, spec.m, wq.kappa, control);

  const Eigen::VectorXd u = u_override ? *u_override : u_vector(spec, theta, wq);

  Adjustment adj;
  adj.beta = spec.X.transpose() * wq.w.cwiseProduct(wq.xi + spec.X * u);
  adj.phi = mean_phi_first_term(spec, wq) + 0.5 * blocks.phiphi / iphiphi +
            s_phi_phi_impl(spec, wq, tables) / iphiphi;
  return adj;
}

Eigen::VectorXd first_order_bias(const ModelSpec& spec, const ParameterPoint& theta,
                                 const SeriesControl& control) {
  const WorkingQuantities wq = working_quantities(spec, theta);
  const DesignFactor factor(spec.X, wq.w);
  const Adjustment adj = mean_adjustment(spec, theta, control);
  const double iphiphi = wq.kprime * wq.kprime * info_kappa(wq.mu, spec.m, wq.kappa, control);
  Eigen::VectorXd bias(spec.p() + 1);
  bias.head(spec.p()) = -factor.apply_info_inverse(adj.beta);
  bias[spec.p()] = -adj.phi / iphiphi;
  return bias;
}

AdjustmentBlocks adjustment_blocks(const ModelSpec& spec, const ParameterPoint& theta,
                                   const SeriesControl& control) {
  const WorkingQuantities wq = working_quantities(spec, theta);
  const std::vector<ExpectationTable> tables = per_observation_tables(wq.mu, wq.kappa, control);
  const RBlocks blocks = r_blocks(spec, theta, wq, tables);
  const double iphiphi = wq.kprime * wq.kprime * info_kappa(wq.mu, spec.m, wq.kappa, control);

  AdjustmentBlocks out;
  out.r_betabeta = blocks.betabeta;
  out.r_betaphi = blocks.betaphi;
  out.r_phiphi = blocks.phiphi;
  out.s_phiphi = s_phi_phi_impl(spec, wq, tables);
  out.u = u_vector(spec, theta, wq);
  out.a_beta = spec.X.transpose() * wq.w.cwiseProduct(wq.xi);
  out.a_phi = mean_phi_first_term(spec, wq) + 0.5 * blocks.phiphi / iphiphi;
  return out;
}

}  // namespace nbreg
