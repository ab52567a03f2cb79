#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "doctest.h"
#include "nshyd/errors.hpp"
#include "nshyd/runner.hpp"
#include "nshyd/scenario.hpp"
#include "nshyd/table.hpp"

using namespace nshyd;
using scenario::Schedule;

namespace {

const char* kSweep = R"(
mode: sweep
sweep:
  v_min_m_per_s: -0.5
  v_max_m_per_s: 0.5
  n_points: 11
  commands:
    - {u_c: 0.5, u_b: 0.2}
    - {u_c: -0.5, u_b: 0.2}
)";

const char* kSimulate = R"(
mode: simulate
simulate:
  T_s: 0.2
  h_s: 0.001
  output_every: 10
  arms:
    - theta0_deg: 0
      schedules:
        u_c: {interpolation: constant, t_s: [0, 0.05], values: [0, -0.3]}
        u_b: 0.3
        f_ey_N: -5000
)";

// Every problem message joined, for substring checks.
std::string problems_of(const std::string& yaml) {
  try {
    scenario::parse(yaml);
  } catch (const scenario::ValidationError& e) {
    std::string all;
    for (const auto& p : e.problems()) all += p + "\n";
    return all;
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

std::string csv(const Table& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

// Replaces the first occurrence of `from`.
std::string edit(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("schedule semantics") {
  Schedule c{Schedule::Interp::Constant, {{1.0, 10.0}, {2.0, 20.0}, {4.0, 0.0}}};
  CHECK(c.at(0.0) == 10.0);
  CHECK(c.at(1.0) == 10.0);
  CHECK(c.at(1.999) == 10.0);
  CHECK(c.at(2.0) == 20.0);
  CHECK(c.at(3.9) == 20.0);
  CHECK(c.at(4.0) == 0.0);
  CHECK(c.at(100.0) == 0.0);

  Schedule l{Schedule::Interp::Linear, {{1.0, 10.0}, {2.0, 20.0}, {4.0, 0.0}}};
  CHECK(l.at(0.0) == 10.0);
  CHECK(l.at(1.5) == doctest::Approx(15.0));
  CHECK(l.at(2.0) == 20.0);
  CHECK(l.at(3.0) == doctest::Approx(10.0));
  CHECK(l.at(5.0) == 0.0);

  CHECK(Schedule::constant(0.3).at(-1.0) == 0.3);
  CHECK(Schedule::constant(0.3).at(1e9) == 0.3);
}

TEST_CASE("sweep scenario parses with reference defaults") {
  const auto sc = scenario::parse(kSweep);
  CHECK(sc.mode == scenario::Mode::Sweep);
  CHECK(sc.sweep.n_points == 11);
  REQUIRE(sc.sweep.commands.size() == 2);
  const auto u = sc.sweep.commands[1].command();
  CHECK(u.u_pr == 0.5);
  CHECK(u.u_th == 0.5);
  CHECK(u.u_ph == 0.0);
  CHECK(u.u_b == 0.2);
  const auto ref = actuator::reference_params();
  CHECK(sc.actuator.A_h == ref.A_h);
  CHECK(sc.actuator.Q == ref.Q);
  CHECK(sc.actuator.c_b == ref.c_b);
  CHECK_FALSE(sc.regen);
}

TEST_CASE("unit suffixes convert to SI") {
  const std::string base = std::string(kSweep) + "actuator:\n";
  const auto mpa = scenario::parse(base + "  P_M_MPa: 30\n  Q_L_per_min: 300\n");
  const auto si = scenario::parse(base + "  P_M_Pa: 3.0e7\n  Q_m3_per_s: 0.005\n");
  CHECK(mpa.actuator.P_M == 3.0e7);
  CHECK(mpa.actuator.Q == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(si.actuator.P_M == 3.0e7);
  CHECK(si.actuator.Q == 0.005);

  const auto deg = scenario::parse(edit(kSimulate, "theta0_deg: 0", "theta0_deg: 30"));
  const auto rad = scenario::parse(edit(kSimulate, "theta0_deg: 0", "theta0_rad: 0.5235987755982988"));
  CHECK(deg.simulate.arms[0].theta0 == doctest::Approx(rad.simulate.arms[0].theta0).epsilon(1e-15));
}

TEST_CASE("scenario problems are reported per field") {
  CHECK(contains(problems_of(std::string(kSweep) + "colour: red\n"), "colour: unknown key"));
  CHECK(contains(problems_of(std::string(kSweep) + "actuator:\n  P_M_MPa: 30\n  P_M_Pa: 3.0e7\n"), "given together"));
  CHECK(contains(problems_of(edit(kSweep, "n_points: 11", "n_points: 1")), "n_points: must be at least 2"));
  CHECK(contains(problems_of(edit(kSweep, "v_max_m_per_s: 0.5", "v_max_m_per_s: -0.6")), "must exceed"));
  CHECK(contains(problems_of(edit(kSweep, "{u_c: 0.5, u_b: 0.2}", "{u_c: 1.5, u_b: 0.2}")), "[-1, 1]"));
  CHECK(contains(problems_of(edit(kSweep, "{u_c: 0.5, u_b: 0.2}", "{u_c: 0.5, u_b: 0.2, u_a: 0.5}")),
                 "no regen block"));
  CHECK(contains(problems_of(edit(kSweep, "{u_c: 0.5, u_b: 0.2}", "{u_c: 0.5, u_ph: 0.5}")), "either u_c"));
  CHECK(contains(problems_of(std::string(kSweep) + "output:\n  columns: [v, nope]\n"), "unknown column 'nope'"));
  CHECK(contains(problems_of("sweep: {}\n"), "mode: required"));
  CHECK(contains(problems_of(edit(kSweep, "mode: sweep", "mode: simulate")), "simulate: required"));

  CHECK(contains(problems_of(edit(kSimulate, "t_s: [0, 0.05]", "t_s: [0.05, 0.05]")), "strictly increasing"));
  CHECK(contains(problems_of(edit(kSimulate, "T_s: 0.2", "T_s: 0.2005")), "multiple of h_s"));
  CHECK(contains(problems_of(edit(kSimulate, "u_b: 0.3", "u_b: 0.0")), "admissible regimes"));
  CHECK(contains(problems_of(edit(kSimulate, "theta0_deg: 0", "theta0_deg: 0\n      theta0_rad: 0")),
                 "given together"));

  // several problems at once, all reported
  const auto many = problems_of(edit(edit(kSweep, "n_points: 11", "n_points: 0"), "v_min_m_per_s", "v_minimum"));
  CHECK(contains(many, "n_points"));
  CHECK(contains(many, "v_minimum: unknown key"));
}

TEST_CASE("available columns") {
  using V = std::vector<std::string>;
  CHECK(scenario::available_columns(scenario::parse(kSweep)) ==
        V{"command", "u_ph", "u_tr", "u_pr", "u_th", "u_b", "v", "f_lo", "f_hi"});
  const auto regen = scenario::parse(std::string(kSweep) + "regen:\n  discharge_coefficient: 0.6\n  valve_area_m2: 1.0e-4\n");
  CHECK(scenario::available_columns(regen) ==
        V{"command", "u_ph", "u_tr", "u_pr", "u_th", "u_b", "u_a", "v", "f_lo", "f_hi", "v_a"});
  const auto shared = scenario::parse(edit(kSweep, "  commands:", "  shared_pump: {n_actuators: 2, v_others_m_per_s: [0.1]}\n  commands:"));
  CHECK(scenario::available_columns(shared) ==
        V{"command", "u_ph", "u_tr", "u_pr", "u_th", "u_b", "v_others", "v", "f_lo", "f_hi", "P", "xi_P"});
  CHECK(scenario::available_columns(scenario::parse(kSimulate)) ==
        V{"t", "theta", "thetadot", "v", "f", "p", "ell", "p_minus_ell"});
}

TEST_CASE("csv format") {
  Table t{{"a", "b"}, {{0.1, 1.0}, {-1e-300, 12345678.9}}};
  const auto text = csv(t);
  CHECK(text == "a,b\n0.10000000000000001,1\n-1e-300,12345678.9\n");
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 479999.99999999994})
    CHECK(std::strtod(format_value(x).c_str(), nullptr) == x);

  const auto s = t.select({"b"});
  CHECK(s.columns == std::vector<std::string>{"b"});
  CHECK(s.rows[1][0] == 12345678.9);
  CHECK(t.select({}).columns == t.columns);
  CHECK_THROWS_AS(t.index("c"), std::out_of_range);
}

TEST_CASE("sweep rows follow the force map") {
  const auto sc = scenario::parse(kSweep);
  const auto t = runner::run_sweep(sc, 1);
  REQUIRE(t.rows.size() == 22);
  const auto n = actuator::normalize(sc.actuator, sc.sweep.commands[0].command());
  const auto& zero = t.rows[5];
  CHECK(zero[t.index("v")] == 0.0);
  const auto z = actuator::gamma_bounds_at_zero(n);
  CHECK(zero[t.index("f_lo")] == z.lo);
  CHECK(zero[t.index("f_hi")] == z.hi);
  CHECK(t.rows[10][t.index("v")] == 0.5);
  CHECK(t.rows[10][t.index("f_lo")] == actuator::gamma(n, 0.5).lo);
  CHECK(t.rows[11][t.index("command")] == 1.0);
}

TEST_CASE("sweep output does not depend on the thread count") {
  const auto sc = scenario::parse(edit(kSweep, "n_points: 11", "n_points: 301"));
  const auto one = csv(runner::run_sweep(sc, 1));
  for (int threads : {2, 3, 8, 64}) CHECK(csv(runner::run_sweep(sc, threads)) == one);
}

TEST_CASE("NSHYD_THREADS") {
  ::setenv("NSHYD_THREADS", "3", 1);
  CHECK(runner::sweep_threads() == 3);
  for (const char* bad : {"0", "-2", "two", "3x"}) {
    ::setenv("NSHYD_THREADS", bad, 1);
    CHECK_THROWS_AS(runner::sweep_threads(), ConfigError);
  }
  ::unsetenv("NSHYD_THREADS");
  CHECK(runner::sweep_threads() >= 1);
}

TEST_CASE("simulation rows and determinism") {
  const auto sc = scenario::parse(kSimulate);
  const auto t = runner::run_simulation(sc);
  REQUIRE(t.rows.size() == 20);
  CHECK(t.rows.front()[t.index("t")] == doctest::Approx(0.01));
  CHECK(t.rows.back()[t.index("t")] == doctest::Approx(0.2));
  for (const auto& r : t.rows) {
    CHECK(r[t.index("p_minus_ell")] == r[t.index("p")] - r[t.index("ell")]);
    if (r[t.index("t")] < 0.05) CHECK(r[t.index("v")] == 0.0);
  }
  CHECK(t.rows.back()[t.index("v")] < 0.0);  // raising command retracts the rod
  CHECK(csv(runner::run_simulation(sc)) == csv(t));
  CHECK_THROWS_AS(runner::run_sweep(sc, 1), ConfigError);
  CHECK_THROWS_AS(runner::run_simulation(scenario::parse(kSweep)), ConfigError);
}

TEST_CASE("column selection") {
  auto sc = scenario::parse(std::string(kSimulate) + "output:\n  columns: [t, f]\n");
  const auto t = runner::run(sc);
  CHECK(t.columns == std::vector<std::string>{"t", "f"});
  CHECK(t.rows.size() == 20);
}

TEST_CASE("solver failure carries the step and the state") {
  const std::string yaml = edit(edit(kSimulate, "u_b: 0.3", "u_b: 0.3\n        u_a: 0.5"),
                                "mode: simulate", "mode: simulate\nregen: {discharge_coefficient: 0.6, valve_area_m2: 1.0e-4}\nsolver:\n  regen: {max_outer: 1}");
  const auto sc = scenario::parse(edit(yaml, "values: [0, -0.3]", "values: [0, 0.5]"));
  try {
    runner::run_simulation(sc);
    FAIL("expected a solver failure");
  } catch (const runner::SolverFailure& e) {
    const std::string msg = e.what();
    CHECK(contains(msg, "step "));
    CHECK(contains(msg, "theta="));
    CHECK(contains(msg, "p="));
  }
}
