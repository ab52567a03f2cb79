#pragma once

#include <algorithm>
#include <cmath>

#include "nshyd/errors.hpp"

// Scalar primitives of the nonsmooth actuator model: signed square and root,
// interval projection, the generalized set-valued signum, and closed-form
// solvers for the two nonsmooth quadratic balance equations.
namespace nshyd::nonsmooth {

/// Closed interval [lo, hi]. Every set value produced by the library is one of these.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo <= hi)) throw DomainError("Interval: lo > hi");
  }
  static Interval point(double x) { return {x, x}; }
  static Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

  bool singleton() const noexcept { return lo == hi; }
  double width() const noexcept { return hi - lo; }
  bool contains(double x, double tol = 0.0) const noexcept { return x >= lo - tol && x <= hi + tol; }
  /// Distance from x to the interval; zero inside.
  double distance(double x) const noexcept { return std::max({lo - x, x - hi, 0.0}); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline double sgn(double x) noexcept { return (x > 0.0) - (x < 0.0); }

/// sgn(x) x^2
inline double s_signed(double x) noexcept { return x * std::abs(x); }

/// sgn(x) sqrt(|x|), the inverse of s_signed.
inline double r_signed(double x) noexcept { return x == 0.0 ? 0.0 : std::copysign(std::sqrt(std::abs(x)), x); }

/// u1^2 u2^2 / (u1^2 + u2^2), zero at the origin. Equals 1/(1/u1^2 + 1/u2^2).
inline double psi(double u1, double u2) noexcept {
  const double a = u1 * u1;
  const double b = u2 * u2;
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b / (a + b);
}

/// max(lo, min(hi, x)).
inline double proj(double lo, double hi, double x) {
  if (lo > hi) throw DomainError("proj: lo > hi");
  return std::max(lo, std::min(hi, x));
}

/// b for x > 0, a for x < 0, hull{a, b} at x = 0.
inline Interval gsgn(double a, double x, double b) {
  if (x > 0.0) return Interval::point(b);
  if (x < 0.0) return Interval::point(a);
  return Interval::hull(a, b);
}

/// Unique x with S(x)/a + b x + c = 0 (a >= 0, b > 0). For a = 0 the
/// quadratic term dominates and x = 0.
double phi_a(double b, double c, double a);

/// Unique x with S(x)/a0 + S(x - x1)/a1 + b x + c = 0 (a0, a1 >= 0 not both
/// zero, b > 0). a0 = 0 pins x = 0 and a1 = 0 pins x = x1.
double phi_b(double b, double c, double a0, double a1, double x1);

/// Which of the four sign regions of (x, x - x1) phi_b selected; exposed for tests.
enum class PhiBBranch { BothNegative, BothPositive, NegativeAboveX1, PositiveBelowX1, Pinned };

PhiBBranch phi_b_branch(double b, double c, double a0, double a1, double x1);

}  // namespace nshyd::nonsmooth
