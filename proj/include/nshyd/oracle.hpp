#pragma once

#include <array>
#include <vector>

#include "nshyd/actuator.hpp"

// Brute-force solver of the reduced single-actuator inclusion system in the
// unknowns (F_h, F_r, P_c, P). It enumerates the complementarity branches of
// each normal-cone relation and bisects the remaining monotone equations; none
// of the closed-form segment formulas are used.
namespace nshyd::oracle {

using actuator::ForceInterval;
using actuator::NormalizedInputs;

struct ResidualPoint {
  double F_h = 0.0;
  double F_r = 0.0;
  double P_c = 0.0;
  double P = 0.0;
  // Distance of each relation to being satisfied: head and rod velocity
  // balance (m/s), pump check and pump node flow (relative to Q), force sum (N).
  std::array<double, 5> residuals{};

  double f() const noexcept { return F_h - F_r; }
};

struct OracleConfig {
  int samples = 33;             // P_c samples across a continuum of solutions
  double flow_tol_rel = 1e-7;   // flow balance tolerance relative to Q
};

/// Residuals of the five relations at a candidate point.
std::array<double, 5> residuals(const NormalizedInputs& n, double v, double F_h, double F_r, double P_c,
                                double P, double f);

/// Every consistent solution found, including the extremes of any continuum.
/// Throws InfeasibleError if no branch combination is consistent.
std::vector<ResidualPoint> solve_points(const NormalizedInputs& n, double v, const OracleConfig& cfg = {});

/// Hull of f = F_h - F_r over the solution set.
ForceInterval solve_inclusion(const NormalizedInputs& n, double v, const OracleConfig& cfg = {});

}  // namespace nshyd::oracle
