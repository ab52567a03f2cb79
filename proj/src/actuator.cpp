#include "nshyd/actuator.hpp"

#include <cmath>
#include <string>

#include "nshyd/errors.hpp"

namespace nshyd::actuator {

using nonsmooth::phi_a;
using nonsmooth::phi_b;
using nonsmooth::proj;
using nonsmooth::psi;
using nonsmooth::s_signed;

void ActuatorParams::validate() const {
  const std::array<std::pair<const char*, double>, 11> fields{{{"A_h", A_h},
                                                               {"A_r", A_r},
                                                               {"P_hM", P_hM},
                                                               {"P_rM", P_rM},
                                                               {"P_M", P_M},
                                                               {"Q", Q},
                                                               {"c_ph", c_ph},
                                                               {"c_th", c_th},
                                                               {"c_pr", c_pr},
                                                               {"c_tr", c_tr},
                                                               {"c_b", c_b}}};
  for (const auto& [name, value] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ConfigError(std::string("ActuatorParams: ") + name + " must be positive and finite");
    }
  }
}

double orifice_coefficient(double discharge_coefficient, double max_area, double density) {
  if (!(density > 0.0)) throw ConfigError("orifice_coefficient: density must be positive");
  return discharge_coefficient * max_area * std::sqrt(2.0 / density);
}

ActuatorParams reference_params() {
  const double c = orifice_coefficient(0.6, 1e-4, 850.0);
  ActuatorParams p;
  p.A_h = 0.024;
  p.A_r = 0.012;
  p.P_hM = 42e6;
  p.P_rM = 40e6;
  p.P_M = 36e6;
  p.Q = 500.0e-3 / 60.0;
  p.c_ph = p.c_th = p.c_pr = p.c_tr = p.c_b = c;
  return p;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::U0: return "U0";
    case Regime::Uplus: return "U+";
    case Regime::Uminus: return "U-";
  }
  return "?";
}

Regime ValveCommand::regime() const {
  for (double u : {u_ph, u_tr, u_pr, u_th, u_b}) {
    if (!(u >= 0.0 && u <= 1.0)) throw RegimeError("valve opening outside [0, 1]");
  }
  const bool extend = u_ph > 0.0 || u_tr > 0.0;
  const bool retract = u_pr > 0.0 || u_th > 0.0;
  if (extend && retract) throw RegimeError("extend and retract valves open simultaneously");
  if (extend) return Regime::Uplus;
  if (retract) return Regime::Uminus;
  if (u_b > 0.0) return Regime::U0;
  throw RegimeError("all valves closed including the bleed valve");
}

ValveCommand ValveCommand::from_common(double u_c, double u_b) {
  const double pos = std::max(u_c, 0.0);
  const double neg = std::max(-u_c, 0.0);
  return {pos, pos, neg, neg, u_b};
}

NormalizedInputs normalize(const ActuatorParams& params, const ValveCommand& cmd) {
  params.validate();
  NormalizedInputs n;
  n.regime = cmd.regime();
  const double head = std::pow(params.A_h, 1.5);
  const double rod = std::pow(params.A_r, 1.5);
  n.uh_ph = params.c_ph * cmd.u_ph / head;
  n.uh_th = params.c_th * cmd.u_th / head;
  n.uh_pr = params.c_pr * cmd.u_pr / rod;
  n.uh_tr = params.c_tr * cmd.u_tr / rod;
  n.U_b = params.c_b * cmd.u_b;
  n.F_hM = params.F_hM();
  n.F_rM = params.F_rM();
  n.params = params;
  return n;
}

double over_sq(double x, double u) noexcept {
  const double u2 = u * u;
  if (u2 > 0.0) return x / u2;
  if (x == 0.0) return 0.0;
  return std::copysign(kSentinel, x);
}

// ---- chamber maps --------------------------------------------------------

namespace {

// A_h^3 S(v - Q/A_h) / U_b^2: head force the supply can sustain at speed v.
double head_supply_term(const NormalizedInputs& n, double v) {
  const auto& p = n.params;
  return over_sq(p.A_h * p.A_h * p.A_h * s_signed(v - p.Q / p.A_h), n.U_b);
}

double rod_supply_term(const NormalizedInputs& n, double v) {
  const auto& p = n.params;
  return over_sq(p.A_r * p.A_r * p.A_r * s_signed(v + p.Q / p.A_r), n.U_b);
}

}  // namespace

double gamma_h_plus(const NormalizedInputs& n, double v) {
  const double supply = std::min(n.params.A_h * n.params.P_M, -head_supply_term(n, v));
  return proj(0.0, n.F_hM, supply - over_sq(s_signed(v), n.uh_ph));
}

double gamma_h_minus(const NormalizedInputs& n, double v) {
  return proj(0.0, n.F_hM, -over_sq(s_signed(v), n.uh_th));
}

double gamma_r_plus(const NormalizedInputs& n, double v) {
  return proj(0.0, n.F_rM, over_sq(s_signed(v), n.uh_tr));
}

double gamma_r_minus(const NormalizedInputs& n, double v) {
  const double supply = std::min(n.params.A_r * n.params.P_M, rod_supply_term(n, v));
  return proj(0.0, n.F_rM, supply + over_sq(s_signed(v), n.uh_pr));
}

// ---- segmented map -------------------------------------------------------

std::string_view to_string(Segment s) {
  switch (s) {
    case Segment::Plus0a: return "+0a";
    case Segment::Plus0b: return "+0b";
    case Segment::Plus1a: return "+1a";
    case Segment::Plus1b: return "+1b";
    case Segment::Plus2a: return "+2a";
    case Segment::Plus2b: return "+2b";
    case Segment::Plus3: return "+3";
    case Segment::RodRelief: return "-F_rM";
    case Segment::Minus0a: return "-0a";
    case Segment::Minus0b: return "-0b";
    case Segment::Minus1a: return "-1a";
    case Segment::Minus1b: return "-1b";
    case Segment::Minus2a: return "-2a";
    case Segment::Minus2b: return "-2b";
    case Segment::Minus3: return "-3";
    case Segment::HeadRelief: return "F_hM";
    case Segment::Holding: return "holding";
  }
  return "?";
}

double segment_value(const NormalizedInputs& n, Segment s, double v, double P) {
  const double Sv = s_signed(v);
  const auto& p = n.params;
  switch (s) {
    case Segment::Plus0a: return n.F_hM - over_sq(Sv, n.uh_tr);
    case Segment::Plus0b: return n.F_hM - n.F_rM;
    case Segment::Plus1a: return -head_supply_term(n, v) - over_sq(Sv, n.uh_ph) - over_sq(Sv, n.uh_tr);
    case Segment::Plus1b: return -head_supply_term(n, v) - over_sq(Sv, n.uh_ph) - n.F_rM;
    case Segment::Plus2a: return p.A_h * P - over_sq(Sv, n.uh_ph) - over_sq(Sv, n.uh_tr);
    case Segment::Plus2b: return p.A_h * P - over_sq(Sv, n.uh_ph) - n.F_rM;
    case Segment::Plus3: return -over_sq(Sv, n.uh_tr);
    case Segment::RodRelief: return -n.F_rM;
    case Segment::Minus0a: return -n.F_rM - over_sq(Sv, n.uh_th);
    case Segment::Minus0b: return -n.F_rM + n.F_hM;
    case Segment::Minus1a: return -rod_supply_term(n, v) - over_sq(Sv, n.uh_pr) - over_sq(Sv, n.uh_th);
    case Segment::Minus1b: return -rod_supply_term(n, v) - over_sq(Sv, n.uh_pr) + n.F_hM;
    case Segment::Minus2a: return -p.A_r * P - over_sq(Sv, n.uh_pr) - over_sq(Sv, n.uh_th);
    case Segment::Minus2b: return -p.A_r * P - over_sq(Sv, n.uh_pr) + n.F_hM;
    case Segment::Minus3: return -over_sq(Sv, n.uh_th);
    case Segment::HeadRelief: return n.F_hM;
    case Segment::Holding: break;
  }
  throw DomainError("segment_value: holding interval has no single value");
}

namespace {

struct Pick {
  double value;
  Segment segment;
};

Pick pick_max(Pick a, Pick b) { return b.value > a.value ? b : a; }
Pick pick_min(Pick a, Pick b) { return b.value < a.value ? b : a; }

Pick plus_lattice(const NormalizedInputs& n, double v, const LatticeSpec& spec) {
  auto seg = [&](Segment s) { return Pick{segment_value(n, s, v, spec.P), s}; };
  const Pick g0 = pick_max(seg(Segment::Plus0a), seg(Segment::Plus0b));
  const Pick g2 = pick_max(seg(Segment::Plus2a), seg(Segment::Plus2b));
  Pick inner = g0;
  if (spec.flow_segments) {
    const Pick g1 = pick_max(seg(Segment::Plus1a), seg(Segment::Plus1b));
    inner = pick_min(pick_min(g0, g1), g2);
  } else {
    inner = pick_min(g0, g2);
  }
  return pick_max(pick_max(inner, seg(Segment::Plus3)), seg(Segment::RodRelief));
}

Pick minus_lattice(const NormalizedInputs& n, double v, const LatticeSpec& spec) {
  auto seg = [&](Segment s) { return Pick{segment_value(n, s, v, spec.P), s}; };
  const Pick g0 = pick_min(seg(Segment::Minus0a), seg(Segment::Minus0b));
  const Pick g2 = pick_min(seg(Segment::Minus2a), seg(Segment::Minus2b));
  Pick inner = g0;
  if (spec.flow_segments) {
    const Pick g1 = pick_min(seg(Segment::Minus1a), seg(Segment::Minus1b));
    inner = pick_max(pick_max(g0, g1), g2);
  } else {
    inner = pick_max(g0, g2);
  }
  return pick_min(pick_min(inner, seg(Segment::Minus3)), seg(Segment::HeadRelief));
}

LatticeSpec single_pump(const NormalizedInputs& n) { return {n.params.P_M, true}; }

}  // namespace

double gamma_plus(const NormalizedInputs& n, double v, const LatticeSpec& spec) {
  return plus_lattice(n, v, spec).value;
}

double gamma_minus(const NormalizedInputs& n, double v, const LatticeSpec& spec) {
  return minus_lattice(n, v, spec).value;
}

double gamma_plus(const NormalizedInputs& n, double v) { return gamma_plus(n, v, single_pump(n)); }
double gamma_minus(const NormalizedInputs& n, double v) { return gamma_minus(n, v, single_pump(n)); }

Segment active_plus_segment(const NormalizedInputs& n, double v, const LatticeSpec& spec) {
  return plus_lattice(n, v, spec).segment;
}

Segment active_minus_segment(const NormalizedInputs& n, double v, const LatticeSpec& spec) {
  return minus_lattice(n, v, spec).segment;
}

ForceInterval gamma_bounds_at_zero(const NormalizedInputs& n) {
  const auto& p = n.params;
  const double h_plus =
      n.uh_ph > 0.0 ? std::min({n.F_hM, p.A_h * p.P_M, over_sq(p.A_h * p.Q * p.Q, n.U_b)}) : 0.0;
  const double r_plus = n.uh_tr > 0.0 ? 0.0 : n.F_rM;
  const double h_minus = n.uh_th > 0.0 ? 0.0 : n.F_hM;
  const double r_minus =
      n.uh_pr > 0.0 ? std::min({n.F_rM, p.A_r * p.P_M, over_sq(p.A_r * p.Q * p.Q, n.U_b)}) : 0.0;
  return {h_plus - r_plus, h_minus - r_minus};
}

ForceInterval gamma(const NormalizedInputs& n, double v) {
  // With the bleed valve shut the flow-limited segments turn vertical at
  // v = Q/A_h (resp. -Q/A_r); the map there is the hull of its one-sided limits.
  const bool vertical = n.U_b == 0.0 && (v == n.params.Q / n.params.A_h || v == -n.params.Q / n.params.A_r);
  if (vertical) {
    auto side = [&](double w) { return v > 0.0 ? gamma_plus(n, w) : gamma_minus(n, w); };
    return Interval::hull(side(std::nextafter(v, -INFINITY)), side(std::nextafter(v, INFINITY)));
  }
  if (v > 0.0) return Interval::point(gamma_plus(n, v));
  if (v < 0.0) return Interval::point(gamma_minus(n, v));
  return gamma_bounds_at_zero(n);
}

// ---- resolvent -----------------------------------------------------------

LambdaCandidates lambda_candidates(const NormalizedInputs& n, double beta, double fbar) {
  if (!(beta > 0.0)) throw DomainError("lambda: beta must be positive");
  const auto& p = n.params;
  const double F_hM = n.F_hM;
  const double F_rM = n.F_rM;
  const double AhPM = p.A_h * p.P_M;
  const double ArPM = p.A_r * p.P_M;
  const double head_flow = n.U_b * n.U_b / (p.A_h * p.A_h * p.A_h);
  const double rod_flow = n.U_b * n.U_b / (p.A_r * p.A_r * p.A_r);
  const double psi_plus = psi(n.uh_ph, n.uh_tr);
  const double psi_minus = psi(n.uh_pr, n.uh_th);

  // Phi_B needs one of its two coefficients positive; otherwise the segment
  // does not exist and takes the neutral element of its enclosing max/min.
  auto phi_b_or = [&](double c, double a0, double a1, double x1, double neutral) {
    if (a0 == 0.0 && a1 == 0.0) return neutral;
    return phi_b(beta, c, a0, a1, x1);
  };

  LambdaCandidates k{};
  k.p0a = phi_a(beta, fbar - F_hM, n.uh_tr * n.uh_tr);
  k.p0b = (F_hM - F_rM - fbar) / beta;
  k.p1a = phi_b_or(fbar, psi_plus, head_flow, p.Q / p.A_h, -kSentinel);
  k.p1b = phi_b_or(fbar + F_rM, n.uh_ph * n.uh_ph, head_flow, p.Q / p.A_h, -kSentinel);
  k.p2a = phi_a(beta, fbar - AhPM, psi_plus);
  k.p2b = phi_a(beta, fbar - AhPM + F_rM, n.uh_ph * n.uh_ph);
  k.p3 = phi_a(beta, fbar, n.uh_tr * n.uh_tr);
  k.rM = (-F_rM - fbar) / beta;
  k.m0a = phi_a(beta, fbar + F_rM, n.uh_th * n.uh_th);
  k.m0b = (F_hM - F_rM - fbar) / beta;
  k.m1a = phi_b_or(fbar, psi_minus, rod_flow, -p.Q / p.A_r, kSentinel);
  k.m1b = phi_b_or(fbar - F_hM, n.uh_pr * n.uh_pr, rod_flow, -p.Q / p.A_r, kSentinel);
  k.m2a = phi_a(beta, fbar + ArPM, psi_minus);
  k.m2b = phi_a(beta, fbar + ArPM - F_hM, n.uh_pr * n.uh_pr);
  k.m3 = phi_a(beta, fbar, n.uh_th * n.uh_th);
  k.hM = (F_hM - fbar) / beta;
  return k;
}

double lambda(const NormalizedInputs& n, double beta, double fbar) {
  const ForceInterval zero = gamma_bounds_at_zero(n);
  if (!(beta > 0.0)) throw DomainError("lambda: beta must be positive");
  const bool plus_or_zero = n.regime == Regime::Uplus || n.regime == Regime::U0;
  const bool minus_or_zero = n.regime == Regime::Uminus || n.regime == Regime::U0;

  if (fbar > n.F_hM && plus_or_zero) return (n.F_hM - fbar) / beta;
  if (fbar < zero.lo && n.regime == Regime::Uplus) {
    const LambdaCandidates k = lambda_candidates(n, beta, fbar);
    const double inner =
        std::min({std::max(k.p0a, k.p0b), std::max(k.p1a, k.p1b), std::max(k.p2a, k.p2b)});
    return std::max({inner, k.p3, k.rM});
  }
  if (fbar < -n.F_rM && minus_or_zero) return (-n.F_rM - fbar) / beta;
  if (fbar > zero.hi && n.regime == Regime::Uminus) {
    const LambdaCandidates k = lambda_candidates(n, beta, fbar);
    const double inner =
        std::max({std::min(k.m0a, k.m0b), std::min(k.m1a, k.m1b), std::min(k.m2a, k.m2b)});
    return std::min({inner, k.m3, k.hM});
  }
  return 0.0;
}

// ---- valve states --------------------------------------------------------

std::string_view to_string(ValveState s) {
  switch (s) {
    case ValveState::Open: return "o";
    case ValveState::Closed: return "x";
    case ValveState::Either: return "-";
  }
  return "?";
}

ValveStateReport valve_states_for(Segment s) {
  constexpr ValveState o = ValveState::Open;
  constexpr ValveState x = ValveState::Closed;
  constexpr ValveState e = ValveState::Either;
  // Columns: head relief, head suction, pump relief, rod suction, rod relief.
  switch (s) {
    case Segment::RodRelief: return {s, x, o, e, x, o};
    case Segment::Plus3: return {s, x, o, e, x, x};
    case Segment::Plus2b: return {s, x, x, o, x, o};
    case Segment::Plus2a: return {s, x, x, o, x, x};
    case Segment::Plus1b: return {s, x, x, x, x, o};
    case Segment::Plus1a: return {s, x, x, x, x, x};
    case Segment::Plus0b: return {s, o, x, e, x, o};
    case Segment::Plus0a: return {s, o, x, e, x, x};
    case Segment::Holding: return {s, x, x, e, x, x};
    case Segment::Minus0a: return {s, x, x, e, x, o};
    case Segment::Minus0b: return {s, o, x, e, x, o};
    case Segment::Minus1a: return {s, x, x, x, x, x};
    case Segment::Minus1b: return {s, o, x, x, x, x};
    case Segment::Minus2a: return {s, x, x, o, x, x};
    case Segment::Minus2b: return {s, o, x, o, x, x};
    case Segment::Minus3: return {s, x, x, e, o, x};
    case Segment::HeadRelief: return {s, o, x, e, o, x};
  }
  return {};
}

ValveStateReport valve_states(const NormalizedInputs& n, double v, double f) {
  const double tol = 1e-6 * std::max(1.0, std::abs(f));
  const ForceInterval graph = gamma(n, v);
  if (!graph.contains(f, tol)) {
    throw InconsistencyError("valve_states: f = " + std::to_string(f) + " is not in Gamma(" +
                             std::to_string(v) + ") = [" + std::to_string(graph.lo) + ", " +
                             std::to_string(graph.hi) + "]");
  }
  if (v > 0.0) return valve_states_for(active_plus_segment(n, v, single_pump(n)));
  if (v < 0.0) return valve_states_for(active_minus_segment(n, v, single_pump(n)));
  return valve_states_for(Segment::Holding);
}

}  // namespace nshyd::actuator
