#pragma once

#include <functional>

namespace nshyd::rootfind {

enum class Method {
  Bisection,
  Illinois,  // false position with the Illinois weight halving, falling back to bisection
};

struct RootConfig {
  double abs_tol = 1e-10;  // bracket width at which to stop, argument units
  double res_tol = 1e-8;   // |f| at which to stop, residual units
  int max_iter = 200;
  Method method = Method::Illinois;

  void validate() const;
};

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

using ScalarFn = std::function<double(double)>;

/// Root of a continuous monotone f bracketed by [lo, hi]. An exactly-zero
/// endpoint is returned as is. Throws BracketError when f(lo) and f(hi) have
/// the same strict sign and ConvergenceError once max_iter is exhausted.
RootResult find_root_detailed(const ScalarFn& f, double lo, double hi, const RootConfig& cfg = {});

inline double find_root_monotone(const ScalarFn& f, double lo, double hi, const RootConfig& cfg = {}) {
  return find_root_detailed(f, lo, hi, cfg).x;
}

}  // namespace nshyd::rootfind
