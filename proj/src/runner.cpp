#include "nshyd/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include "nshyd/errors.hpp"
#include "nshyd/mbs.hpp"
#include "nshyd/multipump.hpp"
#include "nshyd/regen.hpp"

namespace nshyd::runner {

using scenario::Scenario;

int sweep_threads() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("NSHYD_THREADS");
  if (!env || !*env) return static_cast<int>(hw);
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) {
    throw ConfigError(std::string("NSHYD_THREADS: expected a positive integer, got '") + env + "'");
  }
  return static_cast<int>(n);
}

namespace {

// Solver-side exceptions become SolverFailure; configuration errors pass through.
// where() describes the context and is only called on failure.
template <class W, class F>
auto guarded(W&& where, F&& f) {
  try {
    return f();
  } catch (const ConvergenceError& e) {
    throw SolverFailure(where() + ": " + e.what());
  } catch (const BracketError& e) {
    throw SolverFailure(where() + ": " + e.what());
  } catch (const InfeasibleError& e) {
    throw SolverFailure(where() + ": " + e.what());
  } catch (const GeometryError& e) {
    throw SolverFailure(where() + ": " + e.what());
  } catch (const DomainError& e) {
    throw SolverFailure(where() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(where() + ": " + e.what());
  }
}

multipump::PumpNode pump_node(const actuator::ActuatorParams& p, double u_b,
                              std::vector<actuator::NormalizedInputs> actuators) {
  return {p.Q, p.P_M, p.c_b * u_b, std::move(actuators)};
}

std::vector<double> sweep_row(const Scenario& sc, std::size_t cmd_index, double v_other, double v) {
  const auto& spec = sc.sweep.commands[cmd_index];
  const auto cmd = spec.command();
  const auto n = actuator::normalize(sc.actuator, cmd);
  const bool shared = sc.sweep.n_actuators > 1;
  std::vector<double> row{static_cast<double>(cmd_index), cmd.u_ph, cmd.u_tr, cmd.u_pr, cmd.u_th, cmd.u_b};
  if (sc.regen) row.push_back(spec.u_a);
  if (shared) row.push_back(v_other);
  row.push_back(v);
  if (sc.regen) {
    const regen::RegenParams rp{sc.actuator, sc.regen->c_a, spec.u_a};
    const auto g = regen::gamma_reg(rp, n, v);
    row.insert(row.end(), {g.lo, g.hi, regen::v_a_hat(rp, n, v)});
  } else if (shared) {
    const auto node = pump_node(sc.actuator, cmd.u_b,
                                std::vector<actuator::NormalizedInputs>(static_cast<std::size_t>(sc.sweep.n_actuators), n));
    Eigen::VectorXd vv = Eigen::VectorXd::Constant(sc.sweep.n_actuators, v_other);
    vv[0] = v;
    const auto g = multipump::gamma_mul(node, vv)[0];
    const auto& cfg = sc.solver.pressure.config;
    const double P = cfg ? multipump::solve_pressure(node, vv, *cfg) : multipump::solve_pressure(node, vv);
    row.insert(row.end(), {g.lo, g.hi, P, multipump::xi_p(node, vv, P)});
  } else {
    const auto g = actuator::gamma(n, v);
    row.insert(row.end(), {g.lo, g.hi});
  }
  return row;
}

}  // namespace

Table run_sweep(const Scenario& sc) { return run_sweep(sc, sweep_threads()); }

Table run_sweep(const Scenario& sc, int threads) {
  if (sc.mode != scenario::Mode::Sweep) throw ConfigError("run_sweep: scenario mode is not sweep");
  const auto& sw = sc.sweep;
  struct Point {
    std::size_t cmd;
    double v_other, v;
  };
  std::vector<Point> grid;
  const std::vector<double> others = sw.n_actuators > 1 ? sw.v_others : std::vector<double>{0.0};
  for (std::size_t c = 0; c < sw.commands.size(); ++c)
    for (double vo : others)
      for (int i = 0; i < sw.n_points; ++i) {
        const double v = i == sw.n_points - 1 ? sw.v_max : sw.v_min + (sw.v_max - sw.v_min) * i / (sw.n_points - 1);
        grid.push_back({c, vo, v});
      }

  Table t;
  t.columns = scenario::available_columns(sc);
  t.rows.resize(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      try {
        const auto& g = grid[i];
        auto where = [&] {
          std::ostringstream s;
          s.precision(17);
          s << "sweep command " << g.cmd << ", v = " << g.v;
          return s.str();
        };
        t.rows[i] = guarded(where, [&] { return sweep_row(sc, g.cmd, g.v_other, g.v); });
      } catch (...) {
        errors[i] = std::current_exception();
        return;
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, grid.size());
  if (n_threads == 1) {
    work(0, grid.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (grid.size() + n_threads - 1) / n_threads;
    for (std::size_t k = 0; k < n_threads; ++k) {
      const std::size_t lo = k * chunk, hi = std::min(grid.size(), lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return t;
}

Table run_simulation(const Scenario& sc) {
  if (sc.mode != scenario::Mode::Simulate) throw ConfigError("run_simulation: scenario mode is not simulate");
  const auto& sim = sc.simulate;
  const std::size_t N = sim.arms.size();
  std::vector<mbs::ArmParams> arms;
  std::vector<mbs::ArmState> states;
  for (const auto& a : sim.arms) {
    arms.push_back(a.arm);
    states.push_back(mbs::initial_state(a.arm, a.theta0, a.K, a.B));
    states.back().thetadot = a.thetadot0;
  }

  Table t;
  t.columns = scenario::available_columns(sc);
  const long long steps = std::llround(sim.T / sim.h);
  t.rows.reserve(static_cast<std::size_t>(steps / sim.every + 1));
  std::vector<mbs::ArmStepResult> res(N);
  double P = 0.0, relief = 0.0;

  for (long long k = 1; k <= steps; ++k) {
    const double time = static_cast<double>(k) * sim.h;
    auto dump = [&] {
      std::ostringstream s;
      s.precision(17);
      s << "step " << k << " (t = " << time << " s); state:";
      for (std::size_t j = 0; j < N; ++j)
        s << " arm " << j + 1 << " theta=" << states[j].theta << " thetadot=" << states[j].thetadot
          << " p=" << states[j].coupling.p << " ell=" << states[j].ell << ";";
      return s.str();
    };
    guarded(dump, [&] {
      if (sim.shared_pump) {
        std::vector<actuator::NormalizedInputs> ns;
        Eigen::VectorXd f_ey(static_cast<Eigen::Index>(N));
        for (std::size_t j = 0; j < N; ++j) {
          ns.push_back(actuator::normalize(sc.actuator, sim.arms[j].command(time)));
          f_ey[static_cast<Eigen::Index>(j)] = sim.arms[j].f_ey.at(time);
        }
        const auto node = pump_node(sc.actuator, sim.pump_u_b.at(time), std::move(ns));
        const auto r = mbs::arms_step_shared(arms, states, node, f_ey, sim.h, sc.solver.pressure.config);
        res = r.arms;
        P = r.P;
        relief = r.relief_flow;
      } else {
        for (std::size_t j = 0; j < N; ++j) {
          const auto& a = sim.arms[j];
          const auto n = actuator::normalize(sc.actuator, a.command(time));
          states[j].coupling.resolvent =
              sc.regen ? coupling::regeneration({sc.actuator, sc.regen->c_a, a.u_a.at(time)}, n, sc.solver.regen)
                       : coupling::single_pump(n);
          res[j] = mbs::arm_step(arms[j], states[j], a.f_ey.at(time), sim.h);
        }
      }
      return 0;
    });
    if (k % sim.every != 0) continue;
    std::vector<double> row{time};
    for (std::size_t j = 0; j < N; ++j) {
      const auto& s = states[j];
      row.insert(row.end(), {s.theta, s.thetadot, res[j].v, res[j].f, s.coupling.p, res[j].ell, s.coupling.p - res[j].ell});
    }
    if (sim.shared_pump) row.insert(row.end(), {P, relief});
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table run(const Scenario& sc) {
  const Table t = sc.mode == scenario::Mode::Sweep ? run_sweep(sc) : run_simulation(sc);
  return t.select(sc.output.columns);
}

}  // namespace nshyd::runner
