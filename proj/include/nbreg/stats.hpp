#pragma once

namespace nbreg {

// Standard normal quantile, Phi^-1(p) for p in (0, 1); returns 0 at p = 0.5.
double normal_quantile(double p);

}  // namespace nbreg
