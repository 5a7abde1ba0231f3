#include "nbreg/series.hpp"

#include <cmath>

#include "nbreg/errors.hpp"
#include "nbreg/num_util.hpp"

namespace nbreg {

namespace {

void check_args(double mu, double kappa, const SeriesControl& control) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("series requires mu > 0");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("series requires kappa > 0");
  if (!(control.tail_eps > 0.0 && control.tail_eps < 1.0))
    throw InputError("tail_eps must be in (0, 1)");
  if (control.max_terms < 1) throw InputError("max_terms must be >= 1");
}

// Pr(Y = 0) = (1 + kappa mu)^(-1/kappa), in extended precision.
long double pmf_at_zero(double mu, double kappa) {
  return std::exp(static_cast<long double>(-std::log1p(kappa * mu) / kappa));
}

}  // namespace

std::vector<double> tail_probabilities(double mu, double kappa, const SeriesControl& control) {
  check_args(mu, kappa, control);
  const long double ratio = static_cast<long double>(kappa) * mu / (1.0L + kappa * mu);
  const long double inv_kappa = 1.0L / kappa;

  long double f = pmf_at_zero(mu, kappa);
  long double survival = 1.0L - f;
  std::vector<double> out;
  out.push_back(static_cast<double>(std::max(survival, 0.0L)));
  long y = 0;
  while (out.back() >= control.tail_eps) {
    if (++y >= control.max_terms)
      throw SeriesError("survival series did not reach tail tolerance within term budget");
    f *= (y - 1 + inv_kappa) / y * ratio;
    survival -= f;
    out.push_back(static_cast<double>(std::max(survival, 0.0L)));
  }
  return out;
}

double info_kappa(const Eigen::VectorXd& mu, const Eigen::VectorXd& m, double kappa,
                  const SeriesControl& control) {
  if (mu.size() != m.size()) throw InputError("mu and weight lengths differ");
  const long double inv_kappa = 1.0L / kappa;
  detail::KahanSum total;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const std::vector<double> survival = tail_probabilities(mu[i], kappa, control);
    detail::KahanSum series;
    for (std::size_t j = 0; j < survival.size(); ++j) {
      const long double denom = inv_kappa + static_cast<long double>(j);
      series.add(survival[j] / (denom * denom));
    }
    const long double t = static_cast<long double>(kappa) * mu[i];
    const long double mean_part = static_cast<long double>(kappa) * kappa * mu[i] / (1.0L + t);
    total.add(m[i] * (series.value_ld() - mean_part));
  }
  const long double k2 = static_cast<long double>(kappa) * kappa;
  return static_cast<double>(total.value_ld() / (k2 * k2));
}

ExpectationTable expectation_table(double mu, double kappa, const SeriesControl& control) {
  check_args(mu, kappa, control);
  const long double ratio = static_cast<long double>(kappa) * mu / (1.0L + kappa * mu);
  const long double inv_kappa = 1.0L / kappa;

  ExpectationTable table;
  table.mu = mu;
  table.kappa = kappa;

  long double f = pmf_at_zero(mu, kappa);
  long double survival = 1.0L - f;
  long double s1 = 0.0L, s2 = 0.0L, s3 = 0.0L;
  detail::KahanSum e_s1, e_s2, e_s3, e_s1s2, e_s2y, info_series;

  // y = 0 contributes nothing to the S-sums; Pr(Y > 0) opens the info series.
  info_series.add(std::max(survival, 0.0L) / (inv_kappa * inv_kappa));
  long y = 0;
  while (true) {
    if (++y > control.max_terms)
      throw SeriesError("expectation series did not converge within term budget");
    f *= (y - 1 + inv_kappa) / y * ratio;
    const long double j = y - 1;  // S_a(y) picks up the j = y-1 term
    const long double step = j / (kappa * j + 1.0L);
    s1 += step;
    s2 += step * step;
    s3 += step * step * step;

    const long double inc1 = f * s1;
    const long double inc2 = f * s2;
    const long double inc3 = f * s3;
    const long double inc12 = f * s1 * s2;
    const long double inc2y = f * s2 * y;
    e_s1.add(inc1);
    e_s2.add(inc2);
    e_s3.add(inc3);
    e_s1s2.add(inc12);
    e_s2y.add(inc2y);

    survival -= f;
    const long double surv = std::max(survival, 0.0L);
    const long double denom = inv_kappa + y;
    info_series.add(surv / (denom * denom));

    if (surv < control.tail_eps) {
      // Largest relative contribution of this step across the accumulators.
      auto rel = [](long double inc, long double acc) {
        const long double mag = std::abs(acc);
        return mag > 0.0L ? std::abs(inc) / mag : std::abs(inc);
      };
      long double worst = rel(inc1, e_s1.value_ld());
      worst = std::max(worst, rel(inc2, e_s2.value_ld()));
      worst = std::max(worst, rel(inc3, e_s3.value_ld()));
      worst = std::max(worst, rel(inc12, e_s1s2.value_ld()));
      worst = std::max(worst, rel(inc2y, e_s2y.value_ld()));
      if (worst < control.tail_eps) break;
    }
  }

  table.e_s1 = e_s1.value();
  table.e_s2 = e_s2.value();
  table.e_s3 = e_s3.value();
  table.e_s1s2 = e_s1s2.value();
  table.e_s2y = e_s2y.value();
  const long double t = static_cast<long double>(kappa) * mu;
  table.info_kappa_term = static_cast<double>(
      info_series.value_ld() - static_cast<long double>(kappa) * kappa * mu / (1.0L + t));
  table.terms_used = y + 1;
  return table;
}

const ExpectationTable& ExpectationCache::at(double mu) {
  auto it = tables_.find(mu);
  if (it == tables_.end()) it = tables_.emplace(mu, expectation_table(mu, kappa_, control_)).first;
  return it->second;
}

}  // namespace nbreg
