#include "nshyd/coupling.hpp"

#include <cmath>

#include "nshyd/errors.hpp"

namespace nshyd::coupling {

Resolvent single_pump(const actuator::NormalizedInputs& n) {
  return [n](double beta, double fbar) { return actuator::lambda(n, beta, fbar); };
}

Resolvent regeneration(const regen::RegenParams& rp, const actuator::NormalizedInputs& n,
                       const regen::LambdaRegConfig& cfg) {
  regen::check_inputs(rp, n);
  return [rp, n, cfg](double beta, double fbar) { return regen::lambda_reg(rp, n, beta, fbar, cfg); };
}

void CouplingState::validate() const {
  if (!(K > 0.0) || !std::isfinite(K)) throw ConfigError("coupling: K must be positive");
  if (!(B > 0.0) || !std::isfinite(B)) throw ConfigError("coupling: B must be positive");
  if (!std::isfinite(p)) throw ConfigError("coupling: p must be finite");
}

namespace {

void check_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("coupling: time step must be positive");
}

}  // namespace

OdeRhs ode_rhs(const CouplingState& st, double ell, double elldot) {
  st.validate();
  if (!st.resolvent) throw ConfigError("coupling: no resolvent attached");
  const double spring = st.K * (st.p - ell);
  OdeRhs out;
  out.pdot = st.resolvent(st.B, spring - st.B * elldot);
  out.f = spring + st.B * (out.pdot - elldot);
  return out;
}

StepResult step(CouplingState& st, double ell_k, double ell_prev, double h) {
  st.validate();
  check_step(h);
  if (!st.resolvent) throw ConfigError("coupling: no resolvent attached");
  const double beta = st.B + h * st.K;
  StepResult out;
  out.fbar = st.K * (st.p - ell_k) - st.B * (ell_k - ell_prev) / h;
  out.v = st.resolvent(beta, out.fbar);
  out.p_next = st.p + h * out.v;
  out.f = out.fbar + beta * out.v;
  st.p = out.p_next;
  return out;
}

SharedStepResult step_shared(const multipump::PumpNode& node, std::vector<CouplingState>& states,
                             const Eigen::VectorXd& ell_k, const Eigen::VectorXd& ell_prev, double h,
                             const std::optional<rootfind::RootConfig>& cfg) {
  check_step(h);
  const auto N = static_cast<Eigen::Index>(states.size());
  if (states.size() != node.size() || ell_k.size() != N || ell_prev.size() != N) {
    throw DomainError("coupling: shared step sizes do not match the pump node");
  }
  Eigen::VectorXd beta(N);
  SharedStepResult out;
  out.fbar.resize(N);
  for (Eigen::Index j = 0; j < N; ++j) {
    const auto& st = states[static_cast<std::size_t>(j)];
    st.validate();
    beta[j] = st.B + h * st.K;
    out.fbar[j] = st.K * (st.p - ell_k[j]) - st.B * (ell_k[j] - ell_prev[j]) / h;
  }
  const auto r = cfg ? multipump::lambda_mul_detailed(node, beta, out.fbar, *cfg)
                     : multipump::lambda_mul_detailed(node, beta, out.fbar);
  out.v = r.v;
  out.P = r.P;
  out.relief_flow = r.relief_flow;
  out.f = out.fbar + beta.cwiseProduct(out.v);
  for (Eigen::Index j = 0; j < N; ++j) states[static_cast<std::size_t>(j)].p += h * out.v[j];
  return out;
}

}  // namespace nshyd::coupling
