#pragma once

#include <vector>

namespace nbreg {

// Monte Carlo performance summaries, all in percent:
//   pu    — share of estimates strictly below the truth
//   rbias — relative mean bias, 100 * (mean - truth) / truth
//   wald  — coverage of estimate +/- z * se at the given level
//   ibmse — bias-inflation of the MSE, 100 * B^2 / SD^2
struct MetricRow {
  double pu = 0.0;
  double rbias = 0.0;
  double wald = 0.0;
  double ibmse = 0.0;
  long effective_replications = 0;
};

// Throws InputError on empty or mismatched inputs.
MetricRow compute_metrics(const std::vector<double>& estimates, const std::vector<double>& ses,
                          double truth, double level);

struct UnderOverTies {
  long under = 0;
  long over = 0;
  long ties = 0;
};
UnderOverTies count_under_over(const std::vector<double>& estimates, double truth);

}  // namespace nbreg
