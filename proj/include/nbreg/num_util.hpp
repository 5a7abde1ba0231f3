#pragma once

#include <cmath>
#include <cstdint>

namespace nbreg::detail {

// Kahan-compensated accumulator in extended precision. The dispersion
// information series carries a kappa^-4 prefactor, so plain double
// accumulation loses digits exactly where the estimates live.
class KahanSum {
 public:
  void add(long double v) {
    long double y = v - carry_;
    long double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  long double value_ld() const { return sum_; }
  double value() const { return static_cast<double>(sum_); }

 private:
  long double sum_ = 0.0L;
  long double carry_ = 0.0L;
};

// (1+t)*log(1+t) - t, stable near t = 0 where the direct form cancels.
inline double log1p_excess(double t) {
  if (std::abs(t) < 1e-4) {
    // sum_{k>=2} (-1)^k t^k / (k (k-1))
    long double tk = static_cast<long double>(t) * t;
    long double s = 0.0L;
    double sign = 1.0;
    for (int k = 2; k <= 9; ++k) {
      s += sign * tk / (static_cast<long double>(k) * (k - 1));
      tk *= t;
      sign = -sign;
    }
    return static_cast<double>(s);
  }
  long double tl = t;
  return static_cast<double>((1.0L + tl) * std::log1p(tl) - tl);
}

// (2t^3 + 9t^2 + 6t)/(1+t)^2 - 6*log(1+t), stable near t = 0.
// Leading behaviour t^4/2, so the direct form cancels three orders.
inline double poly_log_excess(double t) {
  if (std::abs(t) < 0.05) {
    // sum_{k>=4} (-1)^(k-1) (5 - k - 6/k) t^k
    long double tk = static_cast<long double>(t) * t * t * t;
    long double s = 0.0L;
    double sign = -1.0;  // (-1)^(k-1) at k = 4
    for (int k = 4; k <= 16; ++k) {
      s += sign * (5.0L - k - 6.0L / k) * tk;
      tk *= t;
      sign = -sign;
    }
    return static_cast<double>(s);
  }
  long double tl = t;
  long double num = (2.0L * tl * tl * tl + 9.0L * tl * tl + 6.0L * tl);
  long double den = (1.0L + tl) * (1.0L + tl);
  return static_cast<double>(num / den - 6.0L * std::log1p(tl));
}

// SplitMix64 step; used to derive independent per-replication seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace nbreg::detail
