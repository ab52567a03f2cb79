#pragma once

#include <vector>

#include <Eigen/Core>

#include "nshyd/actuator.hpp"
#include "nshyd/rootfind.hpp"

// Several actuators fed by one pump through a common junction at pressure P.
namespace nshyd::multipump {

using actuator::ForceInterval;
using actuator::NormalizedInputs;

struct PumpNode {
  double Q = 0.0;    // total supply, m^3/s
  double P_M = 0.0;  // pump relief, Pa
  double U_b = 0.0;  // bleed, m^3/(s sqrt(Pa))
  // Per-actuator Q, P_M and U_b inside the inputs are not used here.
  std::vector<NormalizedInputs> actuators;

  std::size_t size() const { return actuators.size(); }

  /// Q > 0, U_b >= 0, N >= 1 and P_M <= every chamber relief pressure;
  /// ConfigError otherwise.
  void validate() const;
};

/// Bracket settings for the junction pressure: width 1e-12 P_M.
rootfind::RootConfig default_pressure_config(const PumpNode& node);

/// Pressure-input map: the single-pump lattice with P_M replaced by P and the
/// flow-limited segments removed.
ForceInterval gamma_hat(const NormalizedInputs& n, double P, double v);

/// Flow drawn from the junction by one actuator at (P, v, f). Zero at v = 0.
double q_p_hat(const NormalizedInputs& n, double P, double v, double f);

/// Relief-valve flow Q - U_b R(P) - sum_j q_p_hat(P, v_j, gamma_hat_j(P, v_j)).
double xi_p(const PumpNode& node, const Eigen::VectorXd& v, double P);

double solve_pressure(const PumpNode& node, const Eigen::VectorXd& v);
double solve_pressure(const PumpNode& node, const Eigen::VectorXd& v, const rootfind::RootConfig& cfg);

/// Every junction pressure compatible with v: where Xi_P vanishes up to
/// rounding, or P_M when the relief valve passes flow. A single point unless
/// the bleed is shut and the actuators draw exactly Q over a pressure range.
struct PressureRange {
  double lo = 0.0;
  double hi = 0.0;
};

PressureRange pressure_range(const PumpNode& node, const Eigen::VectorXd& v);

/// Per-actuator gamma_hat, taken as the hull over pressure_range.
std::vector<ForceInterval> gamma_mul(const PumpNode& node, const Eigen::VectorXd& v);

/// Resolvent of gamma_hat at fixed P; beta > 0.
double lambda_hat(const NormalizedInputs& n, double P, double beta, double fbar);

/// Xi_P with every actuator moving at lambda_hat(P, beta_j, fbar_j).
double xi_p_lambda(const PumpNode& node, const Eigen::VectorXd& beta, const Eigen::VectorXd& fbar, double P);

struct LambdaMulResult {
  Eigen::VectorXd v;
  double P = 0.0;
  double relief_flow = 0.0;  // max(Xi_PLambda(P), 0)
};

LambdaMulResult lambda_mul_detailed(const PumpNode& node, const Eigen::VectorXd& beta, const Eigen::VectorXd& fbar);
LambdaMulResult lambda_mul_detailed(const PumpNode& node, const Eigen::VectorXd& beta, const Eigen::VectorXd& fbar,
                                    const rootfind::RootConfig& cfg);

Eigen::VectorXd lambda_mul(const PumpNode& node, const Eigen::VectorXd& beta, const Eigen::VectorXd& fbar);

}  // namespace nshyd::multipump
