#pragma once

#include <array>
#include <string_view>

#include "nshyd/nonsmooth.hpp"

// Quasistatic model of one double-acting cylinder driven by a four-valve
// independent-metering circuit with a bleed valve, a pump relief valve, and a
// relief/suction-check pair on each chamber.
//
// Sign conventions: v > 0 extends the rod; f > 0 compresses the rod (the
// actuator pushes outward). SI units throughout.
namespace nshyd::actuator {

using nonsmooth::Interval;
using ForceInterval = Interval;

struct ActuatorParams {
  double A_h = 0.0;   // head-side area, m^2
  double A_r = 0.0;   // rod-side area, m^2
  double P_hM = 0.0;  // head relief pressure, Pa
  double P_rM = 0.0;  // rod relief pressure, Pa
  double P_M = 0.0;   // pump relief pressure, Pa
  double Q = 0.0;     // pump supply, m^3/s
  // Orifice coefficients C a sqrt(2/rho), m^3/(s sqrt(Pa)).
  double c_ph = 0.0;
  double c_th = 0.0;
  double c_pr = 0.0;
  double c_tr = 0.0;
  double c_b = 0.0;

  double F_hM() const noexcept { return A_h * P_hM; }
  double F_rM() const noexcept { return A_r * P_rM; }

  /// Throws ConfigError unless every field is strictly positive and finite.
  void validate() const;
};

/// C a sqrt(2 / rho).
double orifice_coefficient(double discharge_coefficient, double max_area, double density);

/// Cylinder used for the numerical examples: 0.024/0.012 m^2, relief at
/// 42/40/36 MPa, 500 L/min, every valve 0.6 x 1e-4 m^2 with 850 kg/m^3 oil.
ActuatorParams reference_params();

enum class Regime { U0, Uplus, Uminus };

std::string_view to_string(Regime r);

/// Opening ratios in [0, 1].
struct ValveCommand {
  double u_ph = 0.0;  // pump -> head
  double u_tr = 0.0;  // rod -> tank
  double u_pr = 0.0;  // pump -> rod
  double u_th = 0.0;  // head -> tank
  double u_b = 0.0;   // bleed

  /// Classifies the command; throws RegimeError when it lies outside all
  /// three admissible sets or has a component outside [0, 1].
  Regime regime() const;

  /// u_ph = u_tr = max(u_c, 0), u_pr = u_th = max(-u_c, 0).
  static ValveCommand from_common(double u_c, double u_b);
};

/// Normalized valve openings: uh_* = c_* u_* / A^{3/2} with the area of the
/// chamber the valve connects to, and U_b = c_b u_b.
struct NormalizedInputs {
  double uh_ph = 0.0;
  double uh_tr = 0.0;
  double uh_pr = 0.0;
  double uh_th = 0.0;
  double U_b = 0.0;
  Regime regime = Regime::U0;
  double F_hM = 0.0;
  double F_rM = 0.0;
  ActuatorParams params;
};

NormalizedInputs normalize(const ActuatorParams& params, const ValveCommand& cmd);

/// x / u^2, with the u = 0 limit taken as +-1e300 (0 when x = 0). The
/// segment lattice saturates these away.
double over_sq(double x, double u) noexcept;

inline constexpr double kSentinel = 1e300;

// ---- chamber maps --------------------------------------------------------

/// Head-side force A_h P_h on the extending branch.
double gamma_h_plus(const NormalizedInputs& n, double v);
double gamma_h_minus(const NormalizedInputs& n, double v);
/// Rod-side force A_r P_r on the extending branch.
double gamma_r_plus(const NormalizedInputs& n, double v);
double gamma_r_minus(const NormalizedInputs& n, double v);

// ---- segmented map -------------------------------------------------------

enum class Segment {
  Plus0a, Plus0b, Plus1a, Plus1b, Plus2a, Plus2b, Plus3, RodRelief,
  Minus0a, Minus0b, Minus1a, Minus1b, Minus2a, Minus2b, Minus3, HeadRelief,
  Holding,  // v = 0, force inside the holding interval
};

std::string_view to_string(Segment s);

/// Value of one curve segment at v with the pump pressure fixed at P
/// (P = P_M for the single-pump map).
double segment_value(const NormalizedInputs& n, Segment s, double v, double P);

/// Which segments take part in the lattice. The shared-pump variant drops the
/// flow-limited segments (1a, 1b) and uses the junction pressure instead of P_M.
struct LatticeSpec {
  double P;
  bool flow_segments;
};

/// Extending-branch lattice max(min(max(0a,0b), max(1a,1b), max(2a,2b)), 3, -F_rM).
double gamma_plus(const NormalizedInputs& n, double v);
/// Retracting-branch lattice min(max(min(0a,0b), min(1a,1b), min(2a,2b)), 3, F_hM).
double gamma_minus(const NormalizedInputs& n, double v);

double gamma_plus(const NormalizedInputs& n, double v, const LatticeSpec& spec);
double gamma_minus(const NormalizedInputs& n, double v, const LatticeSpec& spec);

/// Which segment attains the lattice value (first listed wins ties).
Segment active_plus_segment(const NormalizedInputs& n, double v, const LatticeSpec& spec);
Segment active_minus_segment(const NormalizedInputs& n, double v, const LatticeSpec& spec);

/// [Gamma_+(0), Gamma_-(0)], the force interval that holds the rod still.
ForceInterval gamma_bounds_at_zero(const NormalizedInputs& n);

/// Set-valued map: Gamma_+(v) for v > 0, Gamma_-(v) for v < 0, the holding
/// interval at v = 0.
ForceInterval gamma(const NormalizedInputs& n, double v);

// ---- resolvent -----------------------------------------------------------

/// Candidate velocities solving beta v + fbar = Gamma_*(v) for each segment.
/// Candidates that do not exist in the current regime hold the lattice-neutral
/// sentinel (-1e300 inside max, +1e300 inside min).
struct LambdaCandidates {
  double p0a, p0b, p1a, p1b, p2a, p2b, p3, rM;
  double m0a, m0b, m1a, m1b, m2a, m2b, m3, hM;
};

LambdaCandidates lambda_candidates(const NormalizedInputs& n, double beta, double fbar);

/// Unique v with beta v + fbar in Gamma(v); beta > 0.
double lambda(const NormalizedInputs& n, double beta, double fbar);

// ---- valve states --------------------------------------------------------

enum class ValveState { Open, Closed, Either };

std::string_view to_string(ValveState s);

struct ValveStateReport {
  Segment segment = Segment::Holding;
  ValveState head_relief = ValveState::Closed;
  ValveState head_suction = ValveState::Closed;
  ValveState pump_relief = ValveState::Either;
  ValveState rod_suction = ValveState::Closed;
  ValveState rod_relief = ValveState::Closed;

  friend bool operator==(const ValveStateReport&, const ValveStateReport&) = default;
};

/// Table row for a segment.
ValveStateReport valve_states_for(Segment s);

/// Identifies the active segment at (v, f) and reports the relief/suction
/// valve states. Throws InconsistencyError when f is off the graph by more
/// than 1e-6 relative.
ValveStateReport valve_states(const NormalizedInputs& n, double v, double f);

}  // namespace nshyd::actuator
