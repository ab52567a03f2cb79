#include "nshyd/regen.hpp"

#include <cmath>

#include "nshyd/errors.hpp"
#include "nshyd/rootfind.hpp"

namespace nshyd::regen {

using actuator::gamma_h_plus;
using actuator::gamma_r_plus;
using actuator::Regime;
using nonsmooth::s_signed;

void RegenParams::validate() const {
  base.validate();
  if (base.A_h < base.A_r) throw ConfigError("RegenParams: regeneration requires A_h >= A_r");
  if (!(c_a >= 0.0) || !std::isfinite(c_a)) throw ConfigError("RegenParams: c_a must be non-negative");
  if (!(u_a >= 0.0 && u_a <= 1.0)) throw ConfigError("RegenParams: u_a must lie in [0, 1]");
}

void check_inputs(const RegenParams& rp, const NormalizedInputs& n) {
  rp.validate();
  if (rp.base.A_h != n.params.A_h || rp.base.A_r != n.params.A_r) {
    throw ConfigError("regen: inputs were normalized with a different cylinder");
  }
  if (uh_a(rp) > 0.0 && n.regime == Regime::Uplus && n.uh_tr == 0.0) {
    throw ConfigError("regen: regeneration valve open with the rod-to-tank valve closed");
  }
  if (uh_a(rp) > 0.0 && n.regime == Regime::Uplus && n.U_b == 0.0) {
    throw ConfigError("regen: regeneration valve open with the bleed valve closed");
  }
}

double uh_a(const RegenParams& rp) { return rp.c_a * rp.u_a / std::pow(rp.base.A_r, 1.5); }

namespace {

double area_ratio(const NormalizedInputs& n) { return n.params.A_r / n.params.A_h; }

bool pipeline_idle(const RegenParams& rp, const NormalizedInputs& n, double v) {
  return uh_a(rp) == 0.0 || n.regime != Regime::Uplus || v <= 0.0 || xi_v(rp, n, v, 0.0) >= 0.0;
}

rootfind::RootConfig va_config(double v, double res_tol) {
  rootfind::RootConfig cfg;
  cfg.abs_tol = 1e-15 * std::max(1.0, v);
  cfg.res_tol = res_tol;
  cfg.max_iter = 400;
  return cfg;
}

}  // namespace

double xi_v(const RegenParams& rp, const NormalizedInputs& n, double v, double v_a) {
  const double a = uh_a(rp);
  const double Ahat = area_ratio(n);
  return s_signed(v_a) - a * a * (gamma_r_plus(n, v - v_a) - Ahat * gamma_h_plus(n, v - Ahat * v_a));
}

double xi_f(const NormalizedInputs& n, double beta, double fbar, double v, double v_a) {
  const double Ahat = area_ratio(n);
  return beta * v + fbar - gamma_h_plus(n, v - Ahat * v_a) + gamma_r_plus(n, v - v_a);
}

double v_a_hat(const RegenParams& rp, const NormalizedInputs& n, double v) {
  check_inputs(rp, n);
  if (pipeline_idle(rp, n, v)) return 0.0;
  return rootfind::find_root_monotone([&](double va) { return xi_v(rp, n, v, va); }, 0.0, v,
                                      va_config(v, 1e-14));
}

ForceInterval gamma_reg(const RegenParams& rp, const NormalizedInputs& n, double v) {
  check_inputs(rp, n);
  if (pipeline_idle(rp, n, v)) return actuator::gamma(n, v);
  const double va = v_a_hat(rp, n, v);
  return ForceInterval::point(gamma_h_plus(n, v - area_ratio(n) * va) - gamma_r_plus(n, v - va));
}

LambdaRegResult lambda_reg_detailed(const RegenParams& rp, const NormalizedInputs& n, double beta, double fbar,
                                    const LambdaRegConfig& cfg) {
  check_inputs(rp, n);
  LambdaRegResult out;
  out.v = actuator::lambda(n, beta, fbar);
  if (pipeline_idle(rp, n, out.v)) return out;

  auto root = [](const rootfind::ScalarFn& f, double lo, double hi, double res_tol) {
    rootfind::RootConfig c;
    c.abs_tol = 1e-15 * std::max(1.0, std::abs(hi));
    c.res_tol = res_tol;
    c.max_iter = 400;
    if (f(lo) >= 0.0) return lo;
    if (f(hi) <= 0.0) return hi;
    return rootfind::find_root_monotone(f, lo, hi, c);
  };
  auto va_at = [&](double v, double va_lo) {
    return root([&](double x) { return xi_v(rp, n, v, x); }, va_lo, v, 1e-14);
  };

  // Upper bound on the solution: with v_a = v the regeneration flow is at its
  // largest, so Xi_f(v, v) <= Xi_f(v, v_a) for every admissible v_a.
  const double v_max = (n.F_hM - fbar) / beta;
  double v = out.v;
  double hi = root([&](double x) { return xi_f(n, beta, fbar, x, x); }, v, v_max, 0.1 * cfg.eps_f);
  double h_hi = xi_f(n, beta, fbar, hi, va_at(hi, 0.0));
  double va = 0.0;
  double s_lo = 1.0, s_hi = 1.0;  // Illinois down-weighting of a retained endpoint
  int side = 0;                   // endpoint replaced by the previous step: -1 lower, +1 upper

  for (int it = 1; it <= cfg.max_outer; ++it) {
    out.outer_iterations = it;
    va = va_at(v, va);
    out.trace.emplace_back(v, va);
    double h = xi_f(n, beta, fbar, v, va);
    if (std::abs(h) < cfg.eps_f || hi - v <= 1e-15 * std::max(1.0, std::abs(v))) break;

    // Illinois step on v -> Xi_f(v, v_hat_a(v)) inside [v, hi]. Points with a
    // nonpositive residual are lower bounds and become the new iterate.
    const double c = v + (hi - v) * (-h * s_lo) / (h_hi * s_hi - h * s_lo);
    if (c > v && c < hi) {
      const double va_c = va_at(c, va);
      const double h_c = xi_f(n, beta, fbar, c, va_c);
      if (h_c <= 0.0) {
        v = c;
        va = va_c;
        out.trace.emplace_back(v, va);
        if (std::abs(h_c) < cfg.eps_f) break;
        s_lo = 1.0;
        if (side == -1) s_hi *= 0.5;
        side = -1;
      } else {
        hi = c;
        h_hi = h_c;
        s_hi = 1.0;
        if (side == +1) s_lo *= 0.5;
        side = +1;
      }
    }

    v = root([&](double x) { return xi_f(n, beta, fbar, x, va); }, v, hi, 0.1 * cfg.eps_f);
    out.trace.emplace_back(v, va);
    if (std::abs(xi_v(rp, n, v, va)) < cfg.eps_v) {
      va = va_at(v, va);
      out.trace.emplace_back(v, va);
      if (std::abs(xi_f(n, beta, fbar, v, va)) < cfg.eps_f) break;
    }
    if (it == cfg.max_outer) throw ConvergenceError("lambda_reg: alternating search did not converge", v);
  }
  out.v = v;
  out.v_a = va;
  return out;
}

double lambda_reg(const RegenParams& rp, const NormalizedInputs& n, double beta, double fbar,
                  const LambdaRegConfig& cfg) {
  return lambda_reg_detailed(rp, n, beta, fbar, cfg).v;
}

}  // namespace nshyd::regen
