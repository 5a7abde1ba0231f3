#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nbreg/datasets.hpp"
#include "nbreg/errors.hpp"
#include "nbreg/fit.hpp"
#include "nbreg/sample.hpp"
#include "support/oracles.hpp"

using namespace nbreg;

TEST_CASE("starting values: moment formula and floor") {
  ModelSpec spec;
  spec.y.resize(4);
  spec.y << 0, 1, 3, 4;  // mean 2, sample variance 10/3
  spec.X = Eigen::MatrixXd::Ones(4, 1);
  spec.m = Eigen::VectorXd::Ones(4);
  const ParameterPoint start = starting_values(spec);
  CHECK(disp_eval(spec.transform, start.phi).kappa ==
        doctest::Approx((10.0 / 3.0 - 2.0) / 4.0).epsilon(1e-12));

  ModelSpec flat = spec;
  flat.y.setConstant(3);  // variance 0 -> floor
  CHECK(disp_eval(flat.transform, starting_values(flat).phi).kappa == doctest::Approx(0.01));
}

TEST_CASE("starting values give a convergent fit for every method") {
  const ModelSpec spec = salmonella_model();
  const ParameterPoint start = starting_values(spec);
  CHECK(disp_eval(spec.transform, start.phi).kappa > 0.0);
  for (Method method : {Method::Ml, Method::MeanBc, Method::MeanBr, Method::MedianBr}) {
    FitOptions options;
    options.method = method;
    const FitResult result = fit(spec, options);
    CHECK(result.report.converged);
  }
}

TEST_CASE("iwls step is exact for a noiseless linear-mean model") {
  ModelSpec spec;
  spec.link = Link::Identity;
  spec.X.resize(5, 2);
  spec.X << 1, 0.5, 1, 1.0, 1, 1.5, 1, 2.0, 1, 2.5;
  Eigen::VectorXd beta_true(2);
  beta_true << 2.0, 1.0;
  spec.y.resize(5);
  for (int i = 0; i < 5; ++i)
    spec.y[i] = static_cast<int>(std::lround(spec.X.row(i).dot(beta_true)));
  spec.m = Eigen::VectorXd::Ones(5);

  // y = X beta exactly, so one ML step from any admissible start lands on it
  Eigen::VectorXd start(2);
  start << 3.0, 0.5;
  const Eigen::VectorXd stepped = iwls_beta_step(spec, {start, 0.4}, Method::Ml);
  CHECK((stepped - beta_true).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("converged estimates are fixed points of their own steps") {
  const ModelSpec spec = salmonella_model();
  for (Method method : {Method::Ml, Method::MeanBr, Method::MedianBr}) {
    FitOptions options;
    options.method = method;
    const FitResult result = fit(spec, options);
    REQUIRE(result.report.converged);
    const Eigen::VectorXd beta_next = iwls_beta_step(spec, result.theta, method);
    CHECK((beta_next - result.theta.beta).cwiseAbs().maxCoeff() <= 10.0 * options.tol);
    const double phi_next = fisher_phi_step(spec, result.theta, method, options);
    CHECK(std::abs(phi_next - result.theta.phi) <= 10.0 * options.tol);
  }
}

TEST_CASE("fisher step halves rather than leaving the admissible region") {
  ModelSpec spec;
  spec.y.resize(6);
  spec.y << 1, 2, 1, 3, 2, 1;  // nearly equidispersed, pushes kappa down
  spec.X = Eigen::MatrixXd::Ones(6, 1);
  spec.m = Eigen::VectorXd::Ones(6);
  ParameterPoint theta{Eigen::VectorXd::Constant(1, std::log(5.0 / 3.0)), 0.02};
  FitOptions options;
  const double phi_next = fisher_phi_step(spec, theta, Method::Ml, options);
  CHECK(disp_eval(spec.transform, phi_next).kappa > options.kappa_floor);
}

TEST_CASE("salmonella golden fits") {
  const ModelSpec spec = salmonella_model();

  FitOptions options;
  options.method = Method::Ml;
  const FitResult ml = fit(spec, options);
  REQUIRE(ml.report.converged);
  CHECK(std::abs(ml.theta.beta[0] - 2.19763) < 1e-4);
  CHECK(std::abs(ml.theta.beta[1] - -0.00098) < 1e-4);
  CHECK(std::abs(ml.theta.beta[2] - 0.31251) < 1e-4);
  CHECK(std::abs(ml.kappa - 0.04877) < 1e-4);
  CHECK(std::abs(ml.se[0] - 0.32459) < 1e-4);
  CHECK(std::abs(ml.se[1] - 0.00039) < 1e-4);
  CHECK(std::abs(ml.se[2] - 0.08790) < 1e-4);
  CHECK(std::abs(ml.se[3] - 0.02815) < 1e-4);

  options.method = Method::MeanBc;
  const FitResult bc = fit(spec, options);
  CHECK(std::abs(bc.kappa - 0.06264) < 1e-4);
  CHECK(std::abs(bc.se[3] - 0.03276) < 1e-4);

  options.method = Method::MeanBr;
  const FitResult br = fit(spec, options);
  CHECK(std::abs(br.kappa - 0.06473) < 1e-4);
  CHECK(std::abs(br.se[3] - 0.03345) < 1e-4);

  options.method = Method::MedianBr;
  const FitResult mbr = fit(spec, options);
  CHECK(std::abs(mbr.kappa - 0.06922) < 1e-4);
  CHECK(std::abs(mbr.se[3] - 0.03501) < 1e-4);
}

TEST_CASE("square design with positive counts saturates the mean fit") {
  ModelSpec spec;
  spec.y.resize(2);
  spec.y << 3, 7;
  spec.X.resize(2, 2);
  spec.X << 1, 0, 1, 1;
  spec.m = Eigen::VectorXd::Ones(2);
  spec.link = Link::Identity;
  FitOptions options;
  options.method = Method::Ml;
  const FitResult result = fit(spec, options);
  const Eigen::VectorXd mu = spec.X * result.theta.beta;
  CHECK(mu[0] == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(mu[1] == doctest::Approx(7.0).epsilon(1e-6));
  // kappa behaviour on a saturated fit is reported, not asserted
  CHECK((result.report.converged || result.report.boundary_flag ||
         result.report.failure_kind != FailureKind::None));
}

TEST_CASE("wald intervals") {
  const ModelSpec spec = salmonella_model();
  FitOptions options;
  options.method = Method::Ml;
  const FitResult ml = fit(spec, options);
  REQUIRE(ml.report.converged);

  const auto intervals = wald_intervals(ml, 0.95);
  CHECK(std::abs(intervals[0].first - 1.56144) < 1e-4);
  CHECK(std::abs(intervals[0].second - 2.83381) < 1e-4);

  const auto degenerate = wald_intervals(ml, 0.0);
  CHECK(degenerate[0].first == ml.theta.beta[0]);
  CHECK(degenerate[0].second == ml.theta.beta[0]);

  // half-width is linear in the se
  const auto i95 = intervals[2];
  FitResult doubled = ml;
  doubled.se[2] *= 2.0;
  const auto d95 = wald_intervals(doubled, 0.95)[2];
  CHECK((d95.second - d95.first) == doctest::Approx(2.0 * (i95.second - i95.first)));

  FitResult failed = ml;
  failed.report.converged = false;
  CHECK_THROWS_AS(wald_intervals(failed, 0.95), InputError);

  // kappa-scale mapping under a decreasing transform keeps lower <= upper
  ModelSpec inv_spec = spec;
  inv_spec.transform = DispersionTransform::Inverse;
  FitOptions inv_options;
  inv_options.method = Method::Ml;
  const FitResult inv_fit = fit(inv_spec, inv_options);
  REQUIRE(inv_fit.report.converged);
  const auto mapped = wald_intervals(inv_fit, 0.95, DispersionIntervalScale::Kappa);
  CHECK(mapped[3].first <= mapped[3].second);
}

TEST_CASE("ml dispersion estimate is equivariant across transforms") {
  ModelSpec spec = salmonella_model();
  double reference = 0.0;
  bool first = true;
  for (auto t : {DispersionTransform::Identity, DispersionTransform::Log,
                 DispersionTransform::Inverse, DispersionTransform::Sqrt}) {
    spec.transform = t;
    FitOptions options;
    options.method = Method::Ml;
    const FitResult result = fit(spec, options);
    REQUIRE(result.report.converged);
    if (first) {
      reference = result.kappa;
      first = false;
    } else {
      CHECK(result.kappa == doctest::Approx(reference).epsilon(1e-6));
    }
  }
}

TEST_CASE("median reduction is equivariant, mean reduction is not") {
  ModelSpec spec = salmonella_model();
  FitOptions options;
  options.method = Method::MedianBr;
  spec.transform = DispersionTransform::Identity;
  const double k_identity = fit(spec, options).kappa;
  spec.transform = DispersionTransform::Log;
  const double k_log = fit(spec, options).kappa;
  CHECK(k_log == doctest::Approx(k_identity).epsilon(1e-6));

  options.method = Method::MeanBr;
  spec.transform = DispersionTransform::Identity;
  const double mean_identity = fit(spec, options).kappa;
  spec.transform = DispersionTransform::Log;
  const double mean_log = fit(spec, options).kappa;
  CHECK(std::abs(mean_log - mean_identity) > 1e-4);  // transform-specific by design
}

TEST_CASE("mean reduction is equivariant under column scaling") {
  const ModelSpec spec = salmonella_model();
  FitOptions options;
  options.method = Method::MeanBr;
  const FitResult base = fit(spec, options);
  REQUIRE(base.report.converged);

  ModelSpec scaled = spec;
  const double c = 50.0;
  scaled.X.col(1) *= c;
  const FitResult rescaled = fit(scaled, options);
  REQUIRE(rescaled.report.converged);
  CHECK(rescaled.theta.beta[1] == doctest::Approx(base.theta.beta[1] / c).epsilon(1e-8));
  const Eigen::VectorXd mu_base = (spec.X * base.theta.beta).array().exp();
  const Eigen::VectorXd mu_scaled = (scaled.X * rescaled.theta.beta).array().exp();
  CHECK((mu_base - mu_scaled).cwiseAbs().maxCoeff() < 1e-8 * mu_base.maxCoeff());
}

TEST_CASE("fit is deterministic") {
  const ModelSpec spec = salmonella_model();
  FitOptions options;
  options.method = Method::MedianBr;
  const FitResult a = fit(spec, options);
  const FitResult b = fit(spec, options);
  CHECK(a.theta.beta == b.theta.beta);
  CHECK(a.theta.phi == b.theta.phi);
  CHECK(a.se == b.se);
  CHECK(a.loglik_at_estimate == b.loglik_at_estimate);
}

TEST_CASE("log-likelihood is stationary at the ml estimate") {
  const ModelSpec spec = salmonella_model();
  FitOptions options;
  options.method = Method::Ml;
  const FitResult ml = fit(spec, options);
  REQUIRE(ml.report.converged);
  const Eigen::VectorXd grad = oracles::fd_gradient(spec, ml.theta);
  CHECK(grad.cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("adjusted-score fixed-point residuals are information-scaled small") {
  const ModelSpec spec = salmonella_model();
  for (Method method : {Method::Ml, Method::MeanBr, Method::MedianBr}) {
    FitOptions options;
    options.method = method;
    const FitResult result = fit(spec, options);
    REQUIRE(result.report.converged);
    const ScoreVector sc = score(spec, result.theta);
    Adjustment adj;
    adj.beta = Eigen::VectorXd::Zero(spec.p());
    if (method == Method::MeanBr) adj = mean_adjustment(spec, result.theta);
    if (method == Method::MedianBr) adj = median_adjustment(spec, result.theta);
    const ExpectedInformation info = expected_information(spec, result.theta);
    for (Eigen::Index r = 0; r < spec.p(); ++r) {
      const double scale = std::max(1.0, info.beta_block(r, r));
      CHECK(std::abs(sc.beta[r] + adj.beta[r]) <= 10.0 * options.tol * scale);
    }
    const double scale = std::max(1.0, info.phi_block);
    CHECK(std::abs(sc.phi + adj.phi) <= 10.0 * options.tol * scale);
  }
}

TEST_CASE("mean-bc inherits ml failure") {
  // two observations, variance below mean: ML runs to the boundary
  ModelSpec spec;
  spec.y.resize(3);
  spec.y << 2, 2, 2;
  spec.X = Eigen::MatrixXd::Ones(3, 1);
  spec.m = Eigen::VectorXd::Ones(3);
  FitOptions options;
  options.method = Method::MeanBc;
  options.max_outer = 40;
  const FitResult result = fit(spec, options);
  CHECK(!result.report.converged);
  CHECK(result.method == Method::MeanBc);
}
