#pragma once

#include <cstdint>
#include <random>

namespace nbreg {

// Engine for one replication, derived from (seed, index) so streams are
// independent of execution order and worker count.
std::mt19937_64 replication_rng(std::uint64_t seed, std::uint64_t index);

// One negative binomial draw via the gamma-Poisson mixture:
// lambda ~ Gamma(shape 1/kappa, scale kappa*mu), then Poisson(lambda).
long sample_nb(double mu, double kappa, std::mt19937_64& rng);

}  // namespace nbreg
