#include "nbreg/model.hpp"

#include <cmath>

#include "nbreg/errors.hpp"

namespace nbreg {

void ModelSpec::validate() const {
  const Eigen::Index nn = y.size();
  if (nn < 1) throw InputError("empty response");
  if (X.rows() != nn) throw InputError("design row count does not match response length");
  if (m.size() != nn) throw InputError("weight length does not match response length");
  if (X.cols() < 1) throw InputError("design needs at least one column");
  if (nn < X.cols()) throw InputError("more parameters than observations");
  for (Eigen::Index i = 0; i < nn; ++i) {
    if (y[i] < 0) throw InputError("response must be nonnegative");
    if (!(m[i] > 0.0) || !std::isfinite(m[i])) throw InputError("prior weights must be positive");
  }
  if (!X.allFinite()) throw InputError("design contains non-finite values");
}

}  // namespace nbreg
