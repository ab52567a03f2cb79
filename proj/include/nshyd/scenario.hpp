#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nshyd/actuator.hpp"
#include "nshyd/mbs.hpp"
#include "nshyd/regen.hpp"
#include "nshyd/rootfind.hpp"

// Scenario files: YAML, every physical quantity keyed with its unit suffix.
// See docs/scenario_schema.md.
namespace nshyd::scenario {

/// Every problem found in a scenario, one message per offending field.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class Mode { Sweep, Simulate };

/// (t, value) table; before the first stamp the first value holds, after the
/// last the last value.
struct Schedule {
  enum class Interp { Constant, Linear };
  Interp interp = Interp::Constant;
  std::vector<std::pair<double, double>> points;

  static Schedule constant(double value) { return {Interp::Constant, {{0.0, value}}}; }
  double at(double t) const;
};

/// Valve command either through the common command u_c or per valve.
struct CommandSpec {
  std::optional<double> u_c;
  double u_ph = 0.0, u_tr = 0.0, u_pr = 0.0, u_th = 0.0;
  double u_b = 0.0;
  double u_a = 0.0;
  actuator::ValveCommand command() const;
};

struct RegenSpec {
  double c_a = 0.0;  // orifice coefficient of the regeneration valve
};

struct PressureSolver {
  std::optional<rootfind::RootConfig> config;  // default derived from the pump
};

struct SolverSpec {
  PressureSolver pressure;
  regen::LambdaRegConfig regen;
};

struct SweepSpec {
  double v_min = -0.5, v_max = 0.5;
  int n_points = 401;
  std::vector<CommandSpec> commands;
  // Shared pump: actuator 1 swept, the other n_actuators - 1 held at each listed velocity.
  int n_actuators = 1;
  std::vector<double> v_others;
};

struct ArmSpec {
  mbs::ArmParams arm;
  double theta0 = 0.0;
  double thetadot0 = 0.0;
  double K = coupling::kDefaultStiffness;
  double B = coupling::kDefaultViscosity;
  std::optional<Schedule> u_c;
  Schedule u_ph, u_tr, u_pr, u_th;  // used when u_c is absent
  Schedule u_b = Schedule::constant(0.0);
  Schedule u_a = Schedule::constant(0.0);
  Schedule f_ey = Schedule::constant(0.0);
  actuator::ValveCommand command(double t) const;
};

struct SimulateSpec {
  double T = 0.0;
  double h = 1e-3;
  int every = 1;  // output decimation
  std::vector<ArmSpec> arms;
  bool shared_pump = false;
  Schedule pump_u_b = Schedule::constant(0.0);  // shared pump bleed
};

struct OutputSpec {
  std::string path;
  std::vector<std::string> columns;  // empty: all
};

struct Scenario {
  Mode mode = Mode::Sweep;
  actuator::ActuatorParams actuator = actuator::reference_params();
  std::optional<RegenSpec> regen;
  SolverSpec solver;
  SweepSpec sweep;
  SimulateSpec simulate;
  OutputSpec output;
};

/// CSV columns the scenario produces, in output order.
std::vector<std::string> available_columns(const Scenario& sc);

/// ValidationError on any schema or range problem.
Scenario parse(const std::string& yaml_text);
Scenario load(const std::string& path);

}  // namespace nshyd::scenario
