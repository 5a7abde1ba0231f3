#pragma once

#include "nbreg/model.hpp"

namespace nbreg {

// Mean values below this are floored before logs are taken, so transient
// IWLS states cannot produce -inf. Fits that touch the floor get flagged
// in the convergence report.
inline constexpr double kMuFloor = 1e-300;

// log Pr(Y = y) for a count with mean mu and dispersion kappa.
// The gamma ratio is accumulated as sum_j log(1 + kappa j), which is exact
// at y = 0 and avoids lgamma overflow and small-kappa cancellation.
double nb_log_pmf(long y, double mu, double kappa);

// sum_i m_i log Pr(Y_i = y_i) at theta. Throws DomainError for inadmissible
// theta (propagated from the link or transform evaluation).
double log_likelihood(const ModelSpec& spec, const ParameterPoint& theta);

}  // namespace nbreg
