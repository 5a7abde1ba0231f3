#pragma once

#include <vector>

#include <Eigen/Core>

#include "nbreg/model.hpp"
#include "nbreg/series.hpp"
#include "nbreg/working.hpp"

namespace nbreg {

struct ScoreVector {
  Eigen::VectorXd beta;  // X' W D^-1 (y - mu)
  double phi = 0.0;      // kprime * dispersion score on the kappa scale
};

// Gradient of the log-likelihood at theta.
ScoreVector score(const ModelSpec& spec, const ParameterPoint& theta);

// Expected information. The beta/phi off-diagonal block is identically
// zero by parameter orthogonality and is never stored.
struct ExpectedInformation {
  Eigen::MatrixXd beta_block;  // X' W X
  double phi_block = 0.0;      // kprime^2 * info_kappa
};
ExpectedInformation expected_information(const ModelSpec& spec, const ParameterPoint& theta,
                                         const SeriesControl& control = {});

// Expectation tables for every observation at the current (mu_i, kappa),
// memoized per distinct mu.
std::vector<ExpectationTable> per_observation_tables(const Eigen::VectorXd& mu, double kappa,
                                                     const SeriesControl& control = {});

// Cross-cumulant blocks entering the second-order adjustments.
struct RBlocks {
  Eigen::MatrixXd betabeta;
  Eigen::VectorXd betaphi;  // verification target only; not consumed by the adjustments
  double phiphi = 0.0;
};
RBlocks r_blocks(const ModelSpec& spec, const ParameterPoint& theta, const WorkingQuantities& wq,
                 const std::vector<ExpectationTable>& tables);

// Median-specific dispersion block, oriented so that the median adjustment
// is a_phi_mean + s_phi_phi / i_phiphi. Its curvature part cancels the one
// inside the mean adjustment, which makes the median fixed point exactly
// equivariant under smooth reparameterizations of the dispersion.
double s_phi_phi(const ModelSpec& spec, const ParameterPoint& theta,
                 const std::vector<ExpectationTable>& tables);

// Median shift applied to the beta equation through the working variate.
Eigen::VectorXd u_vector(const ModelSpec& spec, const ParameterPoint& theta,
                         const WorkingQuantities& wq);

struct Adjustment {
  Eigen::VectorXd beta;
  double phi = 0.0;
};

// Score adjustment removing the O(n^-1) mean bias of the estimator.
Adjustment mean_adjustment(const ModelSpec& spec, const ParameterPoint& theta,
                           const SeriesControl& control = {});

// Score adjustment centering each component's median. u_override is a test
// hook; with u forced to zero the beta block reduces to the mean adjustment.
Adjustment median_adjustment(const ModelSpec& spec, const ParameterPoint& theta,
                             const SeriesControl& control = {},
                             const Eigen::VectorXd* u_override = nullptr);

// First-order bias of the maximum likelihood estimator, -i^-1 A, as a
// (p+1)-vector; subtracting it from the ML estimate gives the explicit
// bias correction.
Eigen::VectorXd first_order_bias(const ModelSpec& spec, const ParameterPoint& theta,
                                 const SeriesControl& control = {});

// All adjustment pieces at theta, for verification and diagnostics.
struct AdjustmentBlocks {
  Eigen::VectorXd a_beta;  // mean adjustment, beta block
  double a_phi = 0.0;      // mean adjustment, dispersion block
  Eigen::MatrixXd r_betabeta;
  Eigen::VectorXd r_betaphi;
  double r_phiphi = 0.0;
  double s_phiphi = 0.0;
  Eigen::VectorXd u;
};
AdjustmentBlocks adjustment_blocks(const ModelSpec& spec, const ParameterPoint& theta,
                                   const SeriesControl& control = {});

}  // namespace nbreg
