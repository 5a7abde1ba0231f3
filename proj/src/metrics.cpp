#include "nbreg/metrics.hpp"

#include <cmath>

#include "nbreg/errors.hpp"
#include "nbreg/num_util.hpp"
#include "nbreg/stats.hpp"

namespace nbreg {

UnderOverTies count_under_over(const std::vector<double>& estimates, double truth) {
  UnderOverTies counts;
  for (double e : estimates) {
    if (e < truth)
      ++counts.under;
    else if (e > truth)
      ++counts.over;
    else
      ++counts.ties;
  }
  return counts;
}

MetricRow compute_metrics(const std::vector<double>& estimates, const std::vector<double>& ses,
                          double truth, double level) {
  if (estimates.empty()) throw InputError("metrics require at least one estimate");
  if (estimates.size() != ses.size()) throw InputError("estimate/se length mismatch");
  const double n = static_cast<double>(estimates.size());

  const double z = (level == 0.0) ? 0.0 : normal_quantile(0.5 * (1.0 + level));
  long under = 0;
  long covered = 0;
  detail::KahanSum sum;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (estimates[i] < truth) ++under;
    if (std::abs(estimates[i] - truth) <= z * ses[i]) ++covered;
    sum.add(estimates[i]);
  }
  const double mean = sum.value() / n;

  detail::KahanSum ss;
  for (double e : estimates) ss.add((e - mean) * (e - mean));
  const double sd = estimates.size() > 1 ? std::sqrt(ss.value() / (n - 1.0)) : 0.0;
  const double bias = mean - truth;

  MetricRow row;
  row.pu = 100.0 * under / n;
  row.rbias = 100.0 * bias / truth;
  row.wald = 100.0 * covered / n;
  row.ibmse = sd > 0.0 ? 100.0 * bias * bias / (sd * sd)
                       : (bias == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  row.effective_replications = static_cast<long>(estimates.size());
  return row;
}

}  // namespace nbreg
