#include "nshyd/rootfind.hpp"

#include <cmath>
#include <string>

#include "nshyd/errors.hpp"

namespace nshyd::rootfind {

void RootConfig::validate() const {
  if (!(abs_tol > 0.0)) throw ConfigError("RootConfig: abs_tol must be positive");
  if (!(res_tol > 0.0)) throw ConfigError("RootConfig: res_tol must be positive");
  if (max_iter < 1) throw ConfigError("RootConfig: max_iter must be at least 1");
}

namespace {

double eval(const ScalarFn& f, double x) {
  const double y = f(x);
  if (std::isnan(y)) throw DomainError("find_root: function returned NaN at x = " + std::to_string(x));
  return y;
}

}  // namespace

RootResult find_root_detailed(const ScalarFn& f, double lo, double hi, const RootConfig& cfg) {
  cfg.validate();
  if (!(lo <= hi)) throw DomainError("find_root: lo > hi");

  double flo = eval(f, lo);
  if (flo == 0.0) return {lo, 0.0, 0};
  double fhi = eval(f, hi);
  if (fhi == 0.0) return {hi, 0.0, 0};
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("find_root: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "], f = " + std::to_string(flo) + ", " + std::to_string(fhi));
  }

  // Bracket invariant: flo and fhi keep opposite strict signs.
  double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
  double best_res = std::min(std::abs(flo), std::abs(fhi));
  // Illinois weights on the retained endpoint values.
  double wlo = flo, whi = fhi;
  int side = 0;  // which endpoint was retained on the previous step: -1 lo, +1 hi
  bool force_bisect = cfg.method == Method::Bisection;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const double width = hi - lo;
    if (width <= cfg.abs_tol) {
      const double mid = lo + 0.5 * width;
      return {mid, std::abs(eval(f, mid)), it - 1};
    }

    double x = lo + 0.5 * width;
    if (!force_bisect) {
      const double xfp = (lo * whi - hi * wlo) / (whi - wlo);
      if (std::isfinite(xfp) && xfp > lo && xfp < hi) x = xfp;
    }
    if (x <= lo || x >= hi) {
      // No representable interior point left.
      return {best, best_res, it - 1};
    }

    const double fx = eval(f, x);
    if (std::abs(fx) < best_res) {
      best = x;
      best_res = std::abs(fx);
    }
    if (std::abs(fx) <= cfg.res_tol) return {x, std::abs(fx), it};

    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = wlo = fx;
      if (side == +1) whi *= 0.5;
      side = +1;
    } else {
      hi = x;
      fhi = whi = fx;
      if (side == -1) wlo *= 0.5;
      side = -1;
    }

    if (cfg.method == Method::Illinois) {
      // Guarantee at least a halving every second step.
      force_bisect = !force_bisect && (hi - lo) > 0.5 * width;
    }
  }
  throw ConvergenceError("find_root: max_iter exceeded", best);
}

}  // namespace nshyd::rootfind
