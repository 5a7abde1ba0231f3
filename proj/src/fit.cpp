#include "nbreg/fit.hpp"

#include <algorithm>
#include <cmath>

#include "nbreg/errors.hpp"
#include "nbreg/num_util.hpp"
#include "nbreg/pmf.hpp"
#include "nbreg/stats.hpp"

namespace nbreg {

const char* to_string(Method method) {
  switch (method) {
    case Method::Ml: return "ml";
    case Method::MeanBc: return "mean-bc";
    case Method::MeanBr: return "mean-br";
    case Method::MedianBr: return "median-br";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  if (name == "ml") return Method::Ml;
  if (name == "mean-bc" || name == "mean_bc") return Method::MeanBc;
  if (name == "mean-br" || name == "mean_br") return Method::MeanBr;
  if (name == "median-br" || name == "median_br") return Method::MedianBr;
  throw InputError("unknown method '" + name + "' (expected ml, mean-bc, mean-br or median-br)");
}

const char* to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::None: return "none";
    case FailureKind::MaxIter: return "max_iter";
    case FailureKind::Domain: return "domain";
    case FailureKind::Rank: return "rank";
    case FailureKind::Series: return "series";
  }
  return "?";
}

namespace {

// Dispersion score plus the method's adjustment, and the matching
// information entry, at (beta, phi).
struct PhiEquation {
  double adjusted_score = 0.0;
  double i_phiphi = 0.0;
};

PhiEquation phi_equation(const ModelSpec& spec, const ParameterPoint& theta, Method method,
                         const SeriesControl& control) {
  PhiEquation eq;
  const ScoreVector sc = score(spec, theta);
  const WorkingQuantities wq = working_quantities(spec, theta);
  eq.i_phiphi = wq.kprime * wq.kprime * info_kappa(wq.mu, spec.m, wq.kappa, control);
  double adj = 0.0;
  if (method == Method::MeanBr) adj = mean_adjustment(spec, theta, control).phi;
  if (method == Method::MedianBr) adj = median_adjustment(spec, theta, control).phi;
  eq.adjusted_score = sc.phi + adj;
  return eq;
}

bool kappa_admissible(const ModelSpec& spec, double phi, double floor) {
  try {
    return disp_eval(spec.transform, phi).kappa > floor;
  } catch (const DomainError&) {
    return false;
  }
}

Eigen::VectorXd se_from_information(const ExpectedInformation& info, const DesignFactor& factor,
                                    Eigen::MatrixXd& vcov_beta, double& var_phi) {
  vcov_beta = factor.info_inverse();
  var_phi = 1.0 / info.phi_block;
  Eigen::VectorXd se(vcov_beta.rows() + 1);
  se.head(vcov_beta.rows()) = vcov_beta.diagonal().cwiseSqrt();
  se[vcov_beta.rows()] = std::sqrt(var_phi);
  return se;
}

FitResult finish(const ModelSpec& spec, ParameterPoint theta, Method method,
                 ConvergenceReport report, const SeriesControl& control) {
  FitResult result;
  result.method = method;
  result.link = spec.link;
  result.transform = spec.transform;
  result.report = report;
  result.theta = std::move(theta);
  try {
    result.kappa = disp_eval(spec.transform, result.theta.phi).kappa;
    const WorkingQuantities wq = working_quantities(spec, result.theta);
    const DesignFactor factor(spec.X, wq.w);
    ExpectedInformation info;
    info.beta_block = factor.info();
    info.phi_block = wq.kprime * wq.kprime * info_kappa(wq.mu, spec.m, wq.kappa, control);
    result.se = se_from_information(info, factor, result.vcov_beta, result.var_phi);
    result.loglik_at_estimate = log_likelihood(spec, result.theta);
  } catch (const std::exception&) {
    // Inference quantities are best-effort on failed fits; the report
    // already carries the failure kind.
    if (result.report.failure_kind == FailureKind::None && !result.report.converged)
      result.report.failure_kind = FailureKind::Domain;
  }
  return result;
}

FitResult fit_iterative(const ModelSpec& spec, const FitOptions& options) {
  ConvergenceReport report;
  ParameterPoint theta = options.start ? *options.start : starting_values(spec);
  if (options.start) {
    // A caller-supplied start must be admissible up front.
    disp_eval(spec.transform, theta.phi);
  }

  double step_norm = std::numeric_limits<double>::infinity();
  try {
    for (int outer = 1; outer <= options.max_outer; ++outer) {
      report.outer_iterations = outer;

      const Eigen::VectorXd beta_next = iwls_beta_step(spec, theta, options.method, options.series);
      ParameterPoint mid{beta_next, theta.phi};
      const double phi_next = fisher_phi_step(spec, mid, options.method, options);

      step_norm = (beta_next - theta.beta).cwiseAbs().maxCoeff();
      step_norm = std::max(step_norm, std::abs(phi_next - theta.phi));
      theta.beta = beta_next;
      theta.phi = phi_next;

      const WorkingQuantities wq = working_quantities(spec, theta);
      if (wq.mu.minCoeff() <= kMuFloor) report.mu_floor_flag = true;

      if (step_norm <= options.tol) {
        report.converged = true;
        break;
      }
    }
    report.final_step_norm = step_norm;
    if (!report.converged) report.failure_kind = FailureKind::MaxIter;
  } catch (const RankError&) {
    report.failure_kind = FailureKind::Rank;
    report.final_step_norm = step_norm;
  } catch (const SeriesError&) {
    report.failure_kind = FailureKind::Series;
    report.final_step_norm = step_norm;
  } catch (const DomainError&) {
    report.failure_kind = FailureKind::Domain;
    report.final_step_norm = step_norm;
  }

  // A dispersion estimate within an order of magnitude of the floor is a
  // boundary fit, not a converged one.
  try {
    const double kappa = disp_eval(spec.transform, theta.phi).kappa;
    if (kappa <= 10.0 * options.kappa_floor) {
      report.boundary_flag = true;
      report.converged = false;
      if (report.failure_kind == FailureKind::None) report.failure_kind = FailureKind::Domain;
    }
  } catch (const DomainError&) {
    report.boundary_flag = true;
    report.converged = false;
    if (report.failure_kind == FailureKind::None) report.failure_kind = FailureKind::Domain;
  }

  return finish(spec, std::move(theta), options.method, report, options.series);
}

}  // namespace

ParameterPoint starting_values(const ModelSpec& spec) {
  spec.validate();
  Eigen::VectorXd z(spec.n());
  for (Eigen::Index i = 0; i < spec.n(); ++i)
    z[i] = link_apply(spec.link, spec.y[i] + (spec.y[i] == 0 ? 0.5 : 0.0));
  const DesignFactor factor(spec.X, spec.m);
  ParameterPoint start;
  start.beta = factor.solve_wls(z);

  const double wsum = spec.m.sum();
  const double ybar = spec.m.dot(spec.y.cast<double>()) / wsum;
  double s2 = 0.0;
  if (wsum > 1.0) {
    for (Eigen::Index i = 0; i < spec.n(); ++i)
      s2 += spec.m[i] * (spec.y[i] - ybar) * (spec.y[i] - ybar);
    s2 /= (wsum - 1.0);
  }
  double kappa0 = 0.01;
  if (ybar > 0.0) kappa0 = std::max((s2 - ybar) / (ybar * ybar), 0.01);
  start.phi = phi_from_kappa(spec.transform, kappa0);
  return start;
}

Eigen::VectorXd iwls_beta_step(const ModelSpec& spec, const ParameterPoint& theta, Method method,
                               const SeriesControl& control) {
  (void)control;
  const WorkingQuantities wq = working_quantities(spec, theta);
  const DesignFactor factor(spec.X, wq.w);
  Eigen::VectorXd z =
      wq.eta + ((spec.y.cast<double>() - wq.mu).array() / wq.d.array()).matrix();
  if (method == Method::MeanBr) z += wq.xi;
  if (method == Method::MedianBr) z += wq.xi + spec.X * u_vector(spec, theta, wq);
  return factor.solve_wls(z);
}

double fisher_phi_step(const ModelSpec& spec, const ParameterPoint& theta, Method method,
                       const FitOptions& options) {
  const Method eq_method = (method == Method::MeanBc) ? Method::Ml : method;
  const PhiEquation at_theta = phi_equation(spec, theta, eq_method, options.series);
  const double full_step = at_theta.adjusted_score / at_theta.i_phiphi;
  const double base_norm = std::abs(at_theta.adjusted_score);

  double step = full_step;
  for (int halving = 0; halving <= options.max_halvings; ++halving, step *= 0.5) {
    const double trial = theta.phi + step;
    if (!kappa_admissible(spec, trial, options.kappa_floor)) continue;
    try {
      const PhiEquation at_trial =
          phi_equation(spec, {theta.beta, trial}, eq_method, options.series);
      if (std::abs(at_trial.adjusted_score) <= base_norm * (1.0 + 1e-10) + 1e-14) return trial;
    } catch (const DomainError&) {
      // fall through to the next halving
    } catch (const SeriesError&) {
    }
  }
  throw DomainError("dispersion step halving exhausted");
}

FitResult fit(const ModelSpec& spec, const FitOptions& options) {
  spec.validate();
  if (!(options.tol > 0.0)) throw InputError("tol must be positive");
  if (options.max_outer < 1) throw InputError("max_outer must be >= 1");

  if (options.method != Method::MeanBc) return fit_iterative(spec, options);

  // Explicit correction: fit ML, then subtract the first-order bias and
  // recompute inference at the corrected point.
  FitOptions ml_options = options;
  ml_options.method = Method::Ml;
  FitResult ml = fit_iterative(spec, ml_options);
  if (!ml.report.converged) {
    ml.method = Method::MeanBc;
    return ml;
  }

  ConvergenceReport report = ml.report;
  ParameterPoint corrected = ml.theta;
  try {
    const Eigen::VectorXd bias = first_order_bias(spec, ml.theta, options.series);
    corrected.beta -= bias.head(spec.p());
    corrected.phi -= bias[spec.p()];
    disp_eval(spec.transform, corrected.phi);
  } catch (const std::exception&) {
    report.converged = false;
    report.failure_kind = FailureKind::Domain;
    corrected = ml.theta;
  }
  return finish(spec, std::move(corrected), Method::MeanBc, report, options.series);
}

std::vector<std::pair<double, double>> wald_intervals(const FitResult& result, double level,
                                                      DispersionIntervalScale scale) {
  if (!result.report.converged) throw InputError("wald intervals require a converged fit");
  if (!(level >= 0.0 && level < 1.0)) throw InputError("level must be in [0, 1)");
  const double z = (level == 0.0) ? 0.0 : normal_quantile(0.5 * (1.0 + level));
  const Eigen::Index p = result.theta.beta.size();

  std::vector<std::pair<double, double>> intervals;
  intervals.reserve(p + 1);
  for (Eigen::Index r = 0; r < p; ++r) {
    const double half = z * result.se[r];
    intervals.emplace_back(result.theta.beta[r] - half, result.theta.beta[r] + half);
  }
  const double half = z * result.se[p];
  double lo = result.theta.phi - half;
  double hi = result.theta.phi + half;
  if (scale == DispersionIntervalScale::Kappa) {
    const bool increasing = disp_eval(result.transform, result.theta.phi).kprime > 0.0;
    // Endpoints outside the admissible phi range map to the kappa boundary
    // they approach: 0 on the low side, +inf on the high side.
    auto map_low = [&](double phi) {
      try {
        return disp_eval(result.transform, phi).kappa;
      } catch (const DomainError&) {
        return 0.0;
      }
    };
    auto map_high = [&](double phi) {
      try {
        return disp_eval(result.transform, phi).kappa;
      } catch (const DomainError&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    const double klo = increasing ? map_low(lo) : map_low(hi);
    const double khi = increasing ? map_high(hi) : map_high(lo);
    lo = klo;
    hi = khi;
  }
  intervals.emplace_back(lo, hi);
  return intervals;
}

}  // namespace nbreg
