#pragma once

// Test-only helpers. The bisection here is deliberately independent of the
// library's rootfind module so it can serve as an oracle for it.

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace nshyd::test {

/// Root of a nondecreasing f, found by expanding a bracket around `guess` and
/// bisecting until the bracket no longer shrinks in double precision.
inline double bisect_increasing(const std::function<double(double)>& f, double guess = 0.0, double span = 1.0) {
  double lo = guess - span, hi = guess + span;
  for (int i = 0; i < 2000 && f(lo) > 0.0; ++i) lo = guess - (span *= 2.0);
  for (int i = 0; i < 2000 && f(hi) < 0.0; ++i) hi = guess + (span *= 2.0);
  if (f(lo) > 0.0 || f(hi) < 0.0) throw std::runtime_error("bisect_increasing: no bracket");
  for (int i = 0; i < 5000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Log-uniform sample on [lo, hi] with lo > 0.
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
  return std::exp(d(rng));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double rel_err(double a, double b, double scale) { return std::abs(a - b) / std::max(1.0, scale); }

}  // namespace nshyd::test
