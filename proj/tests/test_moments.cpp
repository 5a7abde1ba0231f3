#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nbreg/errors.hpp"
#include "nbreg/sample.hpp"
#include "nbreg/series.hpp"
#include "support/oracles.hpp"

using namespace nbreg;

namespace {

const double kMuGrid[] = {0.5, 2.0, 10.0};
const double kKappaGrid[] = {0.25, 1.0, 3.0};

// Li2(1/2) = pi^2/12 - log(2)^2/2; the single-observation information
// bracket at mu = kappa = 1 is Li2(1/2) - 1/2.
double dilog_half() {
  const double l2 = std::log(2.0);
  return M_PI * M_PI / 12.0 - 0.5 * l2 * l2;
}

}  // namespace

TEST_CASE("geometric survival at mu = kappa = 1") {
  const auto survival = tail_probabilities(1.0, 1.0);
  for (std::size_t j = 0; j < survival.size(); ++j)
    CHECK(survival[j] == doctest::Approx(std::pow(0.5, j + 1.0)).epsilon(1e-10));
}

TEST_CASE("survival head, monotonicity and tail cutoff") {
  for (double mu : kMuGrid) {
    for (double kappa : kKappaGrid) {
      SeriesControl control;
      const auto survival = tail_probabilities(mu, kappa, control);
      const double p0 = std::exp(-std::log1p(kappa * mu) / kappa);
      CHECK(survival.front() == doctest::Approx(1.0 - p0).epsilon(1e-12));
      for (std::size_t j = 1; j < survival.size(); ++j) CHECK(survival[j] <= survival[j - 1]);
      CHECK(survival.back() < control.tail_eps);
    }
  }
}

TEST_CASE("survival truncation failure is an error") {
  SeriesControl tiny;
  tiny.max_terms = 5;
  CHECK_THROWS_AS(tail_probabilities(50.0, 2.0, tiny), SeriesError);
}

TEST_CASE("info series matches the dilogarithm value") {
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(1, 1.0);
  Eigen::VectorXd m = Eigen::VectorXd::Ones(1);
  const double value = info_kappa(mu, m, 1.0);
  CHECK(value == doctest::Approx(dilog_half() - 0.5).epsilon(1e-9));
  CHECK(value == doctest::Approx(0.0822410).epsilon(2e-5));

  Eigen::VectorXd mu2 = Eigen::VectorXd::Constant(2, 1.0);
  Eigen::VectorXd m2 = Eigen::VectorXd::Ones(2);
  CHECK(info_kappa(mu2, m2, 1.0) == doctest::Approx(2.0 * value).epsilon(1e-14));
}

TEST_CASE("info series equals the variance of the dispersion score") {
  // brute force E(U_kappa^2) on the oracle grid (E U_kappa = 0)
  for (double mu : kMuGrid) {
    for (double kappa : kKappaGrid) {
      Eigen::VectorXd muv = Eigen::VectorXd::Constant(1, mu);
      Eigen::VectorXd m = Eigen::VectorXd::Ones(1);
      const double expected = oracles::brute_force_expectation(
          [&](long y) {
            const double u = oracles::u_kappa(y, mu, kappa);
            return u * u;
          },
          mu, kappa);
      CHECK(info_kappa(muv, m, kappa) == doctest::Approx(expected).epsilon(1e-8));
    }
  }
}

TEST_CASE("info series within Monte Carlo error of the simulated score variance") {
  const double mu = 1.0, kappa = 1.0;
  const long n = 1000000;
  std::mt19937_64 rng = replication_rng(83151u, 0);
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  std::vector<double> values(n);
  for (long i = 0; i < n; ++i) {
    values[i] = oracles::u_kappa(sample_nb(mu, kappa, rng), mu, kappa);
    sum += values[i];
  }
  const double mean = sum / n;
  for (long i = 0; i < n; ++i) {
    const double c = values[i] - mean;
    sum2 += c * c;
    sum4 += c * c * c * c;
  }
  const double variance = sum2 / (n - 1);
  const double m4 = sum4 / n;
  const double mc_se = std::sqrt((m4 - variance * variance) / n);

  Eigen::VectorXd muv = Eigen::VectorXd::Constant(1, mu);
  Eigen::VectorXd m = Eigen::VectorXd::Ones(1);
  CHECK(std::abs(info_kappa(muv, m, kappa) - variance) <= 4.0 * mc_se);
}

TEST_CASE("expectation table closed forms at mu = kappa = 1") {
  const auto table = expectation_table(1.0, 1.0);
  CHECK(table.e_s1 == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-10));
  CHECK(table.e_s1 == doctest::Approx(0.3068528).epsilon(1e-6));
}

TEST_CASE("expectation table vanishes as mu goes to zero") {
  const auto table = expectation_table(1e-12, 1.0);
  CHECK(std::abs(table.e_s1) < 1e-10);
  CHECK(std::abs(table.e_s2) < 1e-10);
  CHECK(std::abs(table.e_s3) < 1e-10);
  CHECK(std::abs(table.e_s1s2) < 1e-10);
  CHECK(std::abs(table.e_s2y) < 1e-10);
}

TEST_CASE("expectation table matches brute-force enumeration on the grid") {
  for (double mu : kMuGrid) {
    for (double kappa : kKappaGrid) {
      const auto table = expectation_table(mu, kappa);
      auto expect = [&](const std::function<double(long)>& f) {
        return oracles::brute_force_expectation(f, mu, kappa);
      };
      const double e1 = expect([&](long y) { return oracles::partial_sum(y, kappa, 1); });
      const double e2 = expect([&](long y) { return oracles::partial_sum(y, kappa, 2); });
      const double e3 = expect([&](long y) { return oracles::partial_sum(y, kappa, 3); });
      const double e12 = expect([&](long y) {
        return oracles::partial_sum(y, kappa, 1) * oracles::partial_sum(y, kappa, 2);
      });
      const double e2y = expect([&](long y) { return oracles::partial_sum(y, kappa, 2) * y; });
      CHECK(table.e_s1 == doctest::Approx(e1).epsilon(1e-9));
      CHECK(table.e_s2 == doctest::Approx(e2).epsilon(1e-9));
      CHECK(table.e_s3 == doctest::Approx(e3).epsilon(1e-9));
      CHECK(table.e_s1s2 == doctest::Approx(e12).epsilon(1e-9));
      CHECK(table.e_s2y == doctest::Approx(e2y).epsilon(1e-9));

      // info bracket agrees with the survival-series route
      Eigen::VectorXd muv = Eigen::VectorXd::Constant(1, mu);
      Eigen::VectorXd m = Eigen::VectorXd::Ones(1);
      const double k4 = kappa * kappa * kappa * kappa;
      CHECK(table.info_kappa_term / k4 ==
            doctest::Approx(info_kappa(muv, m, kappa)).epsilon(1e-10));

      // Cauchy-Schwarz bound on the cross moment
      const double e1sq = expect([&](long y) {
        const double s = oracles::partial_sum(y, kappa, 1);
        return s * s;
      });
      const double e2sq = expect([&](long y) {
        const double s = oracles::partial_sum(y, kappa, 2);
        return s * s;
      });
      CHECK(table.e_s1s2 <= std::sqrt(e1sq * e2sq) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("score-mean-zero identity on the grid") {
  for (double mu : kMuGrid) {
    for (double kappa : kKappaGrid) {
      const auto table = expectation_table(mu, kappa);
      const double t = kappa * mu;
      const double identity = table.e_s1 - mu * mu / (t + 1.0) +
                              ((t + 1.0) * std::log1p(t) - t) /
                                  (kappa * kappa * kappa * mu + kappa * kappa);
      CHECK(std::abs(identity) < 1e-9);
    }
  }
}

TEST_CASE("truncation is stable under halving tail_eps") {
  SeriesControl loose;
  loose.tail_eps = 1e-10;
  SeriesControl tight;
  tight.tail_eps = 5e-11;
  for (double mu : kMuGrid) {
    for (double kappa : kKappaGrid) {
      const auto a = expectation_table(mu, kappa, loose);
      const auto b = expectation_table(mu, kappa, tight);
      auto close = [&](double x, double y) {
        return std::abs(x - y) <= 10.0 * loose.tail_eps * (std::abs(x) + 1.0);
      };
      CHECK(close(a.e_s1, b.e_s1));
      CHECK(close(a.e_s2, b.e_s2));
      CHECK(close(a.e_s3, b.e_s3));
      CHECK(close(a.e_s1s2, b.e_s1s2));
      CHECK(close(a.e_s2y, b.e_s2y));
    }
  }
}

TEST_CASE("brute-force oracle sanity") {
  const double mu = 2.0, kappa = 0.5;
  CHECK(oracles::brute_force_expectation([](long) { return 1.0; }, mu, kappa) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(oracles::brute_force_expectation([](long y) { return double(y); }, mu, kappa) ==
        doctest::Approx(mu).epsilon(1e-9));
  CHECK(oracles::brute_force_expectation([](long y) { return double(y) * y; }, mu, kappa) ==
        doctest::Approx(mu + mu * mu + kappa * mu * mu).epsilon(1e-9));
}

TEST_CASE("expectation cache returns identical tables per mu") {
  ExpectationCache cache(0.7);
  const ExpectationTable& a = cache.at(2.5);
  const ExpectationTable& b = cache.at(2.5);
  CHECK(&a == &b);
  CHECK(cache.at(3.5).mu == doctest::Approx(3.5));
}
