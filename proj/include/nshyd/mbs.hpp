#pragma once

#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "nshyd/actuator.hpp"
#include "nshyd/coupling.hpp"
#include "nshyd/multipump.hpp"

// Single-DOF arm on a pivot, driven by one actuator between the anchor r_b and
// the mount point r_m on the arm. theta is measured from the horizontal.
namespace nshyd::mbs {

struct ArmParams {
  double L_g = 1.5;  // pivot to centre of mass, m
  double L_m = 0.6;  // pivot to actuator mount, m
  double L_f = 3.0;  // pivot to external force, m
  double alpha = std::numbers::pi / 4.0;
  double M = 2000.0;  // kg
  double J = 5000.0;  // kg m^2 about the centre of mass
  double g = 9.81;
  Eigen::Vector2d r_b{-0.3, -1.2};  // actuator base anchor, pivot frame

  /// Positive lengths, mass and inertia, g >= 0; ConfigError otherwise.
  void validate() const;
  double inertia() const { return J + M * L_g * L_g; }
};

struct Geometry {
  Eigen::Vector2d r_g, r_m, r_f;
  Eigen::Vector2d axis;  // unit vector from r_b to r_m
  double ell = 0.0;      // |r_m - r_b|
};

/// GeometryError when r_m coincides with r_b.
Geometry geometry(const ArmParams& arm, double theta);

/// a1 b2 - a2 b1
inline double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Net torque about the pivot; f > 0 pushes r_m away from r_b, f_ey acts upward at r_f.
double torque(const ArmParams& arm, const Geometry& geo, double f, double f_ey);

struct ArmState {
  double theta = 0.0;
  double thetadot = 0.0;
  double ell = 0.0;  // actuator length at the last step
  coupling::CouplingState coupling;
};

/// At rest at theta with the spring unstretched (p = ell).
ArmState initial_state(const ArmParams& arm, double theta, double K = coupling::kDefaultStiffness,
                       double B = coupling::kDefaultViscosity);

struct ArmStepResult {
  double f = 0.0;
  double v = 0.0;    // rod velocity
  double ell = 0.0;  // length used in the step
  double fbar = 0.0;
};

/// One step with the resolvent already attached to st.coupling: geometry at
/// the current theta, coupling step, then semi-implicit Euler on theta.
ArmStepResult arm_step(const ArmParams& arm, ArmState& st, double f_ey, double h);

/// Same, with the single-pump resolvent for the given command.
ArmStepResult arm_step(const ArmParams& arm, ArmState& st, const actuator::ActuatorParams& params,
                       const actuator::ValveCommand& u, double f_ey, double h);

struct SharedArmStepResult {
  std::vector<ArmStepResult> arms;
  double P = 0.0;
  double relief_flow = 0.0;
};

/// Arms on one pump, one joint resolvent call per step. node.actuators[j]
/// belongs to arms[j]; resolvents in the states are ignored.
SharedArmStepResult arms_step_shared(const std::vector<ArmParams>& arms, std::vector<ArmState>& states,
                                     const multipump::PumpNode& node, const Eigen::VectorXd& f_ey, double h,
                                     const std::optional<rootfind::RootConfig>& cfg = std::nullopt);

/// Kinetic + gravitational (zero at theta = 0) + spring energy.
double energy(const ArmParams& arm, const ArmState& st);

}  // namespace nshyd::mbs
