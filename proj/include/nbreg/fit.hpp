#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nbreg/adjust.hpp"
#include "nbreg/model.hpp"
#include "nbreg/series.hpp"

namespace nbreg {

enum class Method { Ml, MeanBc, MeanBr, MedianBr };

const char* to_string(Method method);
Method method_from_string(const std::string& name);

struct FitOptions {
  Method method = Method::Ml;
  int max_outer = 100;
  double tol = 1e-8;  // inf-norm of the parameter change
  int max_halvings = 15;
  double kappa_floor = 1e-8;
  std::optional<ParameterPoint> start;
  SeriesControl series;
};

enum class FailureKind { None, MaxIter, Domain, Rank, Series };

const char* to_string(FailureKind kind);

struct ConvergenceReport {
  bool converged = false;
  int outer_iterations = 0;
  double final_step_norm = std::numeric_limits<double>::quiet_NaN();
  bool boundary_flag = false;  // kappa ended within an order of magnitude of the floor
  bool mu_floor_flag = false;  // some mu_i hit the log floor during iteration
  FailureKind failure_kind = FailureKind::None;
};

struct FitResult {
  Method method = Method::Ml;
  ParameterPoint theta;
  double kappa = 0.0;          // kappa(phi) at the estimate
  Eigen::VectorXd se;          // length p+1; dispersion entry on the phi scale
  Eigen::MatrixXd vcov_beta;   // (X'WX)^-1 at the estimate
  double var_phi = 0.0;
  Link link = Link::Log;
  DispersionTransform transform = DispersionTransform::Identity;
  ConvergenceReport report;
  double loglik_at_estimate = std::numeric_limits<double>::quiet_NaN();
};

// Least-squares coefficients of g(y + 0.5 * 1{y=0}) on X plus a moment
// starting value for the dispersion, floored at 0.01.
ParameterPoint starting_values(const ModelSpec& spec);

// One weighted least-squares update of beta at theta. The working variate is
// z for ML/BC, z + xi for mean reduction and z + xi + X u for median
// reduction, all evaluated at theta.
Eigen::VectorXd iwls_beta_step(const ModelSpec& spec, const ParameterPoint& theta, Method method,
                               const SeriesControl& control = {});

// One scoring update of phi at theta with the method's adjustment, with
// step halving until kappa stays above the floor and the adjusted score
// does not grow. Throws DomainError when halvings are exhausted.
double fisher_phi_step(const ModelSpec& spec, const ParameterPoint& theta, Method method,
                       const FitOptions& options = {});

// Alternate beta and phi updates to convergence. Nonconvergence is reported
// in the ConvergenceReport, never thrown. For MeanBc the ML fit runs first
// and the explicit correction is applied to it, with standard errors
// recomputed at the corrected estimate.
FitResult fit(const ModelSpec& spec, const FitOptions& options);

enum class DispersionIntervalScale { Fitted, Kappa };

// estimate +/- z * se per component. The dispersion interval is reported on
// the fitted phi scale by default; Kappa maps endpoints through the
// monotone transform. Throws InputError on an unconverged result.
std::vector<std::pair<double, double>> wald_intervals(
    const FitResult& result, double level,
    DispersionIntervalScale scale = DispersionIntervalScale::Fitted);

}  // namespace nbreg
