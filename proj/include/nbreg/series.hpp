#pragma once

#include <map>
#include <vector>

#include <Eigen/Core>

namespace nbreg {

struct SeriesControl {
  double tail_eps = 1e-12;  // stop once this little tail mass remains
  long max_terms = 100000;  // hard budget before SeriesError
};

// Survival probabilities Pr(Y > j), j = 0..J, truncated at the first J with
// Pr(Y > J) < tail_eps. Throws SeriesError when max_terms is exhausted.
std::vector<double> tail_probabilities(double mu, double kappa,
                                       const SeriesControl& control = {});

// Expected information for kappa itself (identity scale):
//   kappa^-4 sum_i m_i { sum_j Pr(Y_i > j)/(1/kappa + j)^2 - kappa mu_i/(mu_i + 1/kappa) }
double info_kappa(const Eigen::VectorXd& mu, const Eigen::VectorXd& m, double kappa,
                  const SeriesControl& control = {});

// Expectations of the partial sums S_a(Y) = sum_{j<Y} j^a/(kappa j + 1)^a
// and their products, for one observation. info_kappa_term is the same
// observation's bracket from the info_kappa series (before the kappa^-4
// prefactor and prior weight).
struct ExpectationTable {
  double mu = 0.0;
  double kappa = 0.0;
  double e_s1 = 0.0;
  double e_s2 = 0.0;
  double e_s3 = 0.0;
  double e_s1s2 = 0.0;
  double e_s2y = 0.0;
  double info_kappa_term = 0.0;
  long terms_used = 0;
};

// Enumerates the pmf by recurrence, updating the partial sums incrementally.
// Truncates when the remaining tail mass and the relative size of the last
// increments both drop below tail_eps.
ExpectationTable expectation_table(double mu, double kappa,
                                   const SeriesControl& control = {});

// Exact-key memo for expectation tables within one adjustment evaluation.
// kappa is fixed per evaluation, so tables are keyed by mu alone.
class ExpectationCache {
 public:
  explicit ExpectationCache(double kappa, const SeriesControl& control = {})
      : kappa_(kappa), control_(control) {}
  const ExpectationTable& at(double mu);

 private:
  double kappa_;
  SeriesControl control_;
  std::map<double, ExpectationTable> tables_;
};

}  // namespace nbreg
