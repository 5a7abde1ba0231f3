#include "nbreg/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include "nbreg/errors.hpp"

namespace nbreg {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("normal quantile requires p in (0, 1)");
  static const boost::math::normal_distribution<double> standard_normal(0.0, 1.0);
  return boost::math::quantile(standard_normal, p);
}

}  // namespace nbreg
