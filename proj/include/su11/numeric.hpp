#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace su11 {

// Rising factorial (a)_n = a(a+1)...(a+n-1), (a)_0 = 1.
inline double rising_factorial(double a, std::uint32_t n) {
  double r = 1.0;
  for (std::uint32_t k = 0; k < n; ++k) r *= a + static_cast<double>(k);
  return r;
}

// log (a)_n for a > 0.
inline double log_rising_factorial(double a, std::uint32_t n) {
  if (n == 0) return 0.0;
  return std::lgamma(a + static_cast<double>(n)) - std::lgamma(a);
}

inline double factorial(std::uint32_t n) {
  double r = 1.0;
  for (std::uint32_t k = 2; k <= n; ++k) r *= static_cast<double>(k);
  return r;
}

inline double log_factorial(std::uint32_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0);
}

// Falling factorial x(x-1)...(x-k+1).
inline double falling_factorial(double x, std::uint32_t k) {
  double r = 1.0;
  for (std::uint32_t j = 0; j < k; ++j) r *= x - static_cast<double>(j);
  return r;
}

// binomial(n, k) saturated at `cap`; exact integer arithmetic.
inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k,
                                     std::uint64_t cap) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;  // exact: consecutive prefix products divide
    if (r > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace su11
