#include "nshyd/multipump.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "nshyd/errors.hpp"

namespace nshyd::multipump {

using actuator::Regime;
using nonsmooth::phi_a;
using nonsmooth::proj;
using nonsmooth::psi;
using nonsmooth::r_signed;
using nonsmooth::s_signed;

void PumpNode::validate() const {
  if (actuators.empty()) throw ConfigError("PumpNode: at least one actuator is required");
  if (!(Q > 0.0) || !std::isfinite(Q)) throw ConfigError("PumpNode: Q must be positive");
  if (!(P_M > 0.0) || !std::isfinite(P_M)) throw ConfigError("PumpNode: P_M must be positive");
  if (!(U_b >= 0.0) || !std::isfinite(U_b)) throw ConfigError("PumpNode: U_b must be non-negative");
  for (std::size_t j = 0; j < actuators.size(); ++j) {
    const auto& p = actuators[j].params;
    if (P_M > p.P_hM || P_M > p.P_rM) {
      throw ConfigError("PumpNode: actuator " + std::to_string(j) +
                        " has a chamber relief pressure below the pump relief pressure");
    }
  }
}

rootfind::RootConfig default_pressure_config(const PumpNode& node) {
  rootfind::RootConfig cfg;
  cfg.abs_tol = 1e-12 * node.P_M;
  cfg.res_tol = 1e-15 * node.Q;
  cfg.max_iter = 400;
  return cfg;
}

namespace {

void check_pressure(double P) {
  if (!(P >= 0.0)) throw DomainError("multipump: junction pressure must be non-negative");
}

void check_size(const PumpNode& node, const Eigen::VectorXd& x, const char* what) {
  if (static_cast<std::size_t>(x.size()) != node.size()) {
    throw DomainError(std::string("multipump: ") + what + " has " + std::to_string(x.size()) +
                      " entries for " + std::to_string(node.size()) + " actuators");
  }
}

ForceInterval bounds_at_zero(const NormalizedInputs& n, double P) {
  const auto& p = n.params;
  const double h_plus = n.uh_ph > 0.0 ? std::min(n.F_hM, p.A_h * P) : 0.0;
  const double r_plus = n.uh_tr > 0.0 ? 0.0 : n.F_rM;
  const double h_minus = n.uh_th > 0.0 ? 0.0 : n.F_hM;
  const double r_minus = n.uh_pr > 0.0 ? std::min(n.F_rM, p.A_r * P) : 0.0;
  return {h_plus - r_plus, h_minus - r_minus};
}

// q_p_hat at f on the graph of gamma_hat(P, .); on the throttled supply
// segments the draw is the displaced volume itself.
double draw(const NormalizedInputs& n, double P, double v, double f) {
  const actuator::LatticeSpec spec{P, false};
  if (n.regime == Regime::Uplus && v > 0.0) {
    const auto s = actuator::active_plus_segment(n, v, spec);
    if (s == actuator::Segment::Plus2a || s == actuator::Segment::Plus2b) return n.params.A_h * v;
  } else if (n.regime == Regime::Uminus && v < 0.0) {
    const auto s = actuator::active_minus_segment(n, v, spec);
    if (s == actuator::Segment::Minus2a || s == actuator::Segment::Minus2b) return -n.params.A_r * v;
  }
  return q_p_hat(n, P, v, f);
}

double pressure_root(const PumpNode& node, const std::function<double(double)>& xi,
                     const rootfind::RootConfig& cfg) {
  if (xi(node.P_M) >= 0.0) return node.P_M;
  return rootfind::find_root_monotone(xi, 0.0, node.P_M, cfg);
}

}  // namespace

ForceInterval gamma_hat(const NormalizedInputs& n, double P, double v) {
  check_pressure(P);
  const actuator::LatticeSpec spec{P, false};
  if (v > 0.0) return ForceInterval::point(actuator::gamma_plus(n, v, spec));
  if (v < 0.0) return ForceInterval::point(actuator::gamma_minus(n, v, spec));
  return bounds_at_zero(n, P);
}

double q_p_hat(const NormalizedInputs& n, double P, double v, double f) {
  check_pressure(P);
  if (v == 0.0) return 0.0;
  const auto& p = n.params;
  const double Sv = s_signed(v);
  switch (n.regime) {
    case Regime::U0: return 0.0;
    case Regime::Uplus: {
      const double F_r = proj(0.0, n.F_rM, actuator::over_sq(Sv, n.uh_tr));
      return p.A_h * n.uh_ph * std::max(r_signed(p.A_h * P - F_r - f), 0.0);
    }
    case Regime::Uminus: {
      const double F_h = proj(0.0, n.F_hM, -actuator::over_sq(Sv, n.uh_th));
      return p.A_r * n.uh_pr * std::max(r_signed(p.A_r * P - F_h + f), 0.0);
    }
  }
  return 0.0;
}

double xi_p(const PumpNode& node, const Eigen::VectorXd& v, double P) {
  check_size(node, v, "velocity vector");
  double xi = node.Q - node.U_b * r_signed(P);
  for (std::size_t j = 0; j < node.size(); ++j) {
    const auto& n = node.actuators[j];
    const double vj = v[static_cast<Eigen::Index>(j)];
    if (vj == 0.0) continue;
    xi -= draw(n, P, vj, gamma_hat(n, P, vj).lo);
  }
  return xi;
}

double solve_pressure(const PumpNode& node, const Eigen::VectorXd& v) {
  return solve_pressure(node, v, default_pressure_config(node));
}

double solve_pressure(const PumpNode& node, const Eigen::VectorXd& v, const rootfind::RootConfig& cfg) {
  node.validate();
  check_size(node, v, "velocity vector");
  return pressure_root(node, [&](double P) { return xi_p(node, v, P); }, cfg);
}

PressureRange pressure_range(const PumpNode& node, const Eigen::VectorXd& v) {
  node.validate();
  check_size(node, v, "velocity vector");
  const double tol = 1e-12 * (node.Q + node.U_b * std::sqrt(node.P_M));
  auto xi = [&](double P) { return xi_p(node, v, P); };
  // Smallest P in [0, P_M] where the nonincreasing xi passes below the level.
  auto first_below = [&](double level) {
    double lo = 0.0, hi = node.P_M;
    while (hi - lo > 1e-14 * node.P_M) {
      const double mid = 0.5 * (lo + hi);
      if (xi(mid) <= level) hi = mid; else lo = mid;
    }
    return hi;
  };
  if (xi(node.P_M) > tol) return {node.P_M, node.P_M};
  const double lo = first_below(tol);
  const double hi = xi(node.P_M) >= -tol ? node.P_M : first_below(-tol);
  return {lo, std::max(lo, hi)};
}

std::vector<ForceInterval> gamma_mul(const PumpNode& node, const Eigen::VectorXd& v) {
  const PressureRange P = pressure_range(node, v);
  std::vector<ForceInterval> out;
  out.reserve(node.size());
  for (std::size_t j = 0; j < node.size(); ++j) {
    const double vj = v[static_cast<Eigen::Index>(j)];
    const auto a = gamma_hat(node.actuators[j], P.lo, vj);
    const auto b = gamma_hat(node.actuators[j], P.hi, vj);
    out.emplace_back(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
  }
  return out;
}

double lambda_hat(const NormalizedInputs& n, double P, double beta, double fbar) {
  if (!(beta > 0.0)) throw DomainError("lambda_hat: beta must be positive");
  check_pressure(P);
  const ForceInterval zero = bounds_at_zero(n, P);
  if (zero.lo <= fbar && fbar <= zero.hi) return 0.0;

  const auto& p = n.params;
  const bool plus_or_zero = n.regime == Regime::Uplus || n.regime == Regime::U0;
  const bool minus_or_zero = n.regime == Regime::Uminus || n.regime == Regime::U0;

  if (fbar >= n.F_hM && plus_or_zero) return (n.F_hM - fbar) / beta;
  if (fbar <= zero.lo && n.regime == Regime::Uplus) {
    const auto k = actuator::lambda_candidates(n, beta, fbar);
    const double p2a = phi_a(beta, fbar - p.A_h * P, psi(n.uh_ph, n.uh_tr));
    const double p2b = phi_a(beta, fbar - p.A_h * P + n.F_rM, n.uh_ph * n.uh_ph);
    return std::max({std::min(std::max(k.p0a, k.p0b), std::max(p2a, p2b)), k.p3, k.rM});
  }
  if (fbar <= -n.F_rM && minus_or_zero) return (-n.F_rM - fbar) / beta;
  if (fbar >= zero.hi && n.regime == Regime::Uminus) {
    const auto k = actuator::lambda_candidates(n, beta, fbar);
    const double m2a = phi_a(beta, fbar + p.A_r * P, psi(n.uh_pr, n.uh_th));
    const double m2b = phi_a(beta, fbar + p.A_r * P - n.F_hM, n.uh_pr * n.uh_pr);
    return std::min({std::max(std::min(k.m0a, k.m0b), std::min(m2a, m2b)), k.m3, k.hM});
  }
  return 0.0;
}

double xi_p_lambda(const PumpNode& node, const Eigen::VectorXd& beta, const Eigen::VectorXd& fbar, double P) {
  check_size(node, beta, "beta");
  check_size(node, fbar, "fbar");
  double xi = node.Q - node.U_b * r_signed(P);
  for (std::size_t j = 0; j < node.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    const auto& n = node.actuators[j];
    const double v = lambda_hat(n, P, beta[i], fbar[i]);
    xi -= draw(n, P, v, fbar[i] + beta[i] * v);
  }
  return xi;
}

LambdaMulResult lambda_mul_detailed(const PumpNode& node, const Eigen::VectorXd& beta, const Eigen::VectorXd& fbar) {
  return lambda_mul_detailed(node, beta, fbar, default_pressure_config(node));
}

LambdaMulResult lambda_mul_detailed(const PumpNode& node, const Eigen::VectorXd& beta, const Eigen::VectorXd& fbar,
                                    const rootfind::RootConfig& cfg) {
  node.validate();
  check_size(node, beta, "beta");
  check_size(node, fbar, "fbar");
  if (!(beta.array() > 0.0).all()) throw DomainError("lambda_mul: every beta must be positive");

  LambdaMulResult out;
  out.P = pressure_root(node, [&](double P) { return xi_p_lambda(node, beta, fbar, P); }, cfg);
  out.v.resize(beta.size());
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    out.v[i] = lambda_hat(node.actuators[static_cast<std::size_t>(i)], out.P, beta[i], fbar[i]);
  }
  out.relief_flow = std::max(xi_p_lambda(node, beta, fbar, out.P), 0.0);
  return out;
}

Eigen::VectorXd lambda_mul(const PumpNode& node, const Eigen::VectorXd& beta, const Eigen::VectorXd& fbar) {
  return lambda_mul_detailed(node, beta, fbar).v;
}

}  // namespace nshyd::multipump
