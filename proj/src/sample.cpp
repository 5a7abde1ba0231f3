#include "nbreg/sample.hpp"

#include <cmath>

#include "nbreg/errors.hpp"
#include "nbreg/num_util.hpp"

namespace nbreg {

std::mt19937_64 replication_rng(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  detail::splitmix64(state);
  state ^= 0x9e3779b97f4a7c15ULL * (index + 1);
  const std::uint64_t derived = detail::splitmix64(state);
  return std::mt19937_64(derived);
}

long sample_nb(double mu, double kappa, std::mt19937_64& rng) {
  if (!(mu > 0.0) || !(kappa > 0.0) || !std::isfinite(mu) || !std::isfinite(kappa))
    throw DomainError("sampling requires positive finite mu and kappa");
  std::gamma_distribution<double> gamma(1.0 / kappa, kappa * mu);
  const double lambda = gamma(rng);
  if (!(lambda > 0.0)) return 0;
  std::poisson_distribution<long> poisson(lambda);
  return poisson(rng);
}

}  // namespace nbreg
