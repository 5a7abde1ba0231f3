#pragma once

#include <stdexcept>
#include <string>

namespace nbreg {

// Inadmissible parameter or predictor value (eta / phi / mu out of range).
// Solvers catch this to step-halve instead of propagating NaN.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Design matrix is rank deficient at the requested weights.
class RankError : public std::runtime_error {
 public:
  explicit RankError(const std::string& what) : std::runtime_error(what) {}
};

// A series did not reach its tail tolerance within the term budget.
class SeriesError : public std::runtime_error {
 public:
  explicit SeriesError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user-facing input (CLI flags, datasets, scenario configs).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nbreg
