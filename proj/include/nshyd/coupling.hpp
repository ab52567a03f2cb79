#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "nshyd/actuator.hpp"
#include "nshyd/multipump.hpp"
#include "nshyd/regen.hpp"

// Virtual spring-damper between the quasistatic actuator (rod position p) and
// the mechanism (total length ell): f = K (p - ell) + B (pdot - elldot), f in Gamma(pdot).
namespace nshyd::coupling {

/// v with beta v + fbar in Gamma(v).
using Resolvent = std::function<double(double beta, double fbar)>;

Resolvent single_pump(const actuator::NormalizedInputs& n);
Resolvent regeneration(const regen::RegenParams& rp, const actuator::NormalizedInputs& n,
                       const regen::LambdaRegConfig& cfg = {});

inline constexpr double kDefaultStiffness = 5e7;  // N/m
inline constexpr double kDefaultViscosity = 2.5e6;  // N s/m

struct CouplingState {
  double p = 0.0;
  double K = kDefaultStiffness;
  double B = kDefaultViscosity;
  Resolvent resolvent;

  /// K > 0, B > 0, resolvent set; ConfigError otherwise.
  void validate() const;
};

struct OdeRhs {
  double pdot = 0.0;
  double f = 0.0;
};

OdeRhs ode_rhs(const CouplingState& st, double ell, double elldot);

struct StepResult {
  double f = 0.0;       // force at the end of the step
  double v = 0.0;       // rod velocity over the step
  double fbar = 0.0;
  double p_next = 0.0;
};

/// Implicit Euler step; advances st.p. h > 0.
StepResult step(CouplingState& st, double ell_k, double ell_prev, double h);

struct SharedStepResult {
  Eigen::VectorXd f;
  Eigen::VectorXd v;
  Eigen::VectorXd fbar;
  double P = 0.0;
  double relief_flow = 0.0;
};

/// Joint step of actuators on one pump. Uses K, B and p of each state, not its
/// resolvent; advances every p. cfg defaults to the pump's pressure config.
SharedStepResult step_shared(const multipump::PumpNode& node, std::vector<CouplingState>& states,
                             const Eigen::VectorXd& ell_k, const Eigen::VectorXd& ell_prev, double h,
                             const std::optional<rootfind::RootConfig>& cfg = std::nullopt);

}  // namespace nshyd::coupling
