#include "nshyd/mbs.hpp"

#include <cmath>
#include <string>

#include "nshyd/errors.hpp"

namespace nshyd::mbs {

void ArmParams::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(std::string("arm: ") + name + " must be positive");
  };
  positive(L_g, "L_g");
  positive(L_m, "L_m");
  positive(L_f, "L_f");
  positive(M, "M");
  positive(J, "J");
  if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("arm: g must be non-negative");
  if (!std::isfinite(alpha) || !r_b.allFinite()) throw ConfigError("arm: alpha and r_b must be finite");
}

Geometry geometry(const ArmParams& arm, double theta) {
  Geometry geo;
  geo.r_g = arm.L_g * Eigen::Vector2d(std::cos(theta), std::sin(theta));
  geo.r_m = -arm.L_m * Eigen::Vector2d(std::cos(theta - arm.alpha), std::sin(theta - arm.alpha));
  geo.r_f = arm.L_f * Eigen::Vector2d(std::cos(theta), std::sin(theta));
  const Eigen::Vector2d d = geo.r_m - arm.r_b;
  geo.ell = d.norm();
  if (!(geo.ell > 0.0)) throw GeometryError("arm: actuator mount coincides with its anchor");
  geo.axis = d / geo.ell;
  return geo;
}

double torque(const ArmParams& arm, const Geometry& geo, double f, double f_ey) {
  return cross(geo.r_g, Eigen::Vector2d(0.0, -arm.M * arm.g)) + cross(geo.r_m, f * geo.axis) +
         cross(geo.r_f, Eigen::Vector2d(0.0, f_ey));
}

ArmState initial_state(const ArmParams& arm, double theta, double K, double B) {
  arm.validate();
  ArmState st;
  st.theta = theta;
  st.ell = geometry(arm, theta).ell;
  st.coupling.p = st.ell;
  st.coupling.K = K;
  st.coupling.B = B;
  st.coupling.validate();
  return st;
}

namespace {

void integrate(const ArmParams& arm, ArmState& st, const Geometry& geo, double f, double f_ey, double h) {
  st.thetadot += h * torque(arm, geo, f, f_ey) / arm.inertia();
  st.theta += h * st.thetadot;
  st.ell = geo.ell;
}

}  // namespace

ArmStepResult arm_step(const ArmParams& arm, ArmState& st, double f_ey, double h) {
  const Geometry geo = geometry(arm, st.theta);
  const auto c = coupling::step(st.coupling, geo.ell, st.ell, h);
  integrate(arm, st, geo, c.f, f_ey, h);
  return {c.f, c.v, geo.ell, c.fbar};
}

ArmStepResult arm_step(const ArmParams& arm, ArmState& st, const actuator::ActuatorParams& params,
                       const actuator::ValveCommand& u, double f_ey, double h) {
  st.coupling.resolvent = coupling::single_pump(actuator::normalize(params, u));
  return arm_step(arm, st, f_ey, h);
}

SharedArmStepResult arms_step_shared(const std::vector<ArmParams>& arms, std::vector<ArmState>& states,
                                     const multipump::PumpNode& node, const Eigen::VectorXd& f_ey, double h,
                                     const std::optional<rootfind::RootConfig>& cfg) {
  const auto N = static_cast<Eigen::Index>(arms.size());
  if (states.size() != arms.size() || f_ey.size() != N) {
    throw DomainError("arms_step_shared: arms, states and f_ey differ in size");
  }
  std::vector<Geometry> geo;
  std::vector<coupling::CouplingState> cs;
  Eigen::VectorXd ell(N), prev(N);
  for (Eigen::Index j = 0; j < N; ++j) {
    const auto k = static_cast<std::size_t>(j);
    geo.push_back(geometry(arms[k], states[k].theta));
    ell[j] = geo.back().ell;
    prev[j] = states[k].ell;
    cs.push_back(states[k].coupling);
  }
  const auto r = coupling::step_shared(node, cs, ell, prev, h, cfg);
  SharedArmStepResult out;
  out.P = r.P;
  out.relief_flow = r.relief_flow;
  for (Eigen::Index j = 0; j < N; ++j) {
    const auto k = static_cast<std::size_t>(j);
    states[k].coupling.p = cs[k].p;
    integrate(arms[k], states[k], geo[k], r.f[j], f_ey[j], h);
    out.arms.push_back({r.f[j], r.v[j], ell[j], r.fbar[j]});
  }
  return out;
}

double energy(const ArmParams& arm, const ArmState& st) {
  const double stretch = st.coupling.p - geometry(arm, st.theta).ell;
  return 0.5 * arm.inertia() * st.thetadot * st.thetadot + arm.M * arm.g * arm.L_g * std::sin(st.theta) +
         0.5 * st.coupling.K * stretch * stretch;
}

}  // namespace nshyd::mbs
