#pragma once

#include <utility>
#include <vector>

#include "nshyd/actuator.hpp"

// Rod-to-head regeneration pipeline on the extending side. The regeneration
// flow is expressed as the rod-side velocity v_a = Q_a / A_r.
namespace nshyd::regen {

using actuator::ForceInterval;
using actuator::NormalizedInputs;

struct RegenParams {
  actuator::ActuatorParams base;
  double c_a = 0.0;  // regeneration valve coefficient, m^3/(s sqrt(Pa))
  double u_a = 0.0;  // opening in [0, 1]

  /// A_h >= A_r, c_a >= 0, u_a in [0, 1]; ConfigError otherwise.
  void validate() const;
};

/// Throws ConfigError when the regeneration valve is open in U+ with the
/// rod-to-tank or the bleed valve closed, or when rp itself is invalid.
void check_inputs(const RegenParams& rp, const NormalizedInputs& n);

/// c_a u_a / A_r^{3/2}
double uh_a(const RegenParams& rp);

/// S(v_a) - uh_a^2 (Gamma_r+(v - v_a) - (A_r/A_h) Gamma_h+(v - (A_r/A_h) v_a)).
/// Increasing in v_a, nonincreasing in v.
double xi_v(const RegenParams& rp, const NormalizedInputs& n, double v, double v_a);

/// beta v + fbar - Gamma_h+(v - (A_r/A_h) v_a) + Gamma_r+(v - v_a).
/// Increasing in v, nonincreasing in v_a.
double xi_f(const NormalizedInputs& n, double beta, double fbar, double v, double v_a);

/// Regeneration velocity at rod velocity v; 0 whenever the pipeline carries no flow.
double v_a_hat(const RegenParams& rp, const NormalizedInputs& n, double v);

ForceInterval gamma_reg(const RegenParams& rp, const NormalizedInputs& n, double v);

struct LambdaRegConfig {
  double eps_f = 1e-3;  // N
  double eps_v = 1e-9;
  int max_outer = 100;
};

struct LambdaRegResult {
  double v = 0.0;
  double v_a = 0.0;
  int outer_iterations = 0;
  std::vector<std::pair<double, double>> trace;  // (v, v_a) after each update
};

LambdaRegResult lambda_reg_detailed(const RegenParams& rp, const NormalizedInputs& n, double beta, double fbar,
                                    const LambdaRegConfig& cfg = {});

/// Unique v with beta v + fbar in Gamma_reg(v).
double lambda_reg(const RegenParams& rp, const NormalizedInputs& n, double beta, double fbar,
                  const LambdaRegConfig& cfg = {});

}  // namespace nshyd::regen
