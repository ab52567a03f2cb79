#include "doctest.h"
#include "nshyd/actuator.hpp"
#include "nshyd/errors.hpp"
#include "nshyd/oracle.hpp"
#include "random_inputs.hpp"

#include <cmath>
#include <vector>

using namespace nshyd::actuator;
using nshyd::test::log_uniform;
using nshyd::test::random_inputs;
using nshyd::test::uniform;

namespace {

NormalizedInputs reference(double u_c, double u_b) {
  return normalize(reference_params(), ValveCommand::from_common(u_c, u_b));
}

std::vector<double> v_grid(double lo, double hi, int points) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) {
    const double v = lo + (hi - lo) * i / (points - 1);
    out.push_back(std::abs(v) < 1e-14 ? 0.0 : v);
  }
  return out;
}

}  // namespace

TEST_CASE("reference parameters") {
  const auto p = reference_params();
  CHECK(p.F_hM() == doctest::Approx(1.008e6));
  CHECK(p.F_rM() == doctest::Approx(4.8e5));
  CHECK(p.Q == doctest::Approx(8.3333333e-3));
  CHECK(p.c_b == doctest::Approx(0.6 * 1e-4 * std::sqrt(2.0 / 850.0)));
  CHECK_NOTHROW(p.validate());
  auto bad = p;
  bad.c_tr = 0.0;
  CHECK_THROWS_AS(bad.validate(), nshyd::ConfigError);
}

TEST_CASE("normalize classifies regimes") {
  const auto p = reference_params();
  CHECK(normalize(p, {0, 0, 0, 0, 0.2}).regime == Regime::U0);
  CHECK(normalize(p, {0.5, 0.5, 0, 0, 0.2}).regime == Regime::Uplus);
  CHECK(normalize(p, {0, 0, 0.5, 0.5, 0.0}).regime == Regime::Uminus);
  CHECK(normalize(p, {0, 0.3, 0, 0, 0.0}).regime == Regime::Uplus);
  CHECK_THROWS_AS(normalize(p, {0.5, 0, 0.5, 0, 0.2}), nshyd::RegimeError);
  CHECK_THROWS_AS(normalize(p, {0, 0, 0, 0, 0}), nshyd::RegimeError);
  CHECK_THROWS_AS(normalize(p, {1.5, 1, 0, 0, 0}), nshyd::RegimeError);
  CHECK_THROWS_AS(normalize(p, {-0.1, 0, 0, 0, 0.2}), nshyd::RegimeError);

  const auto n = normalize(p, {0.5, 0.25, 0, 0, 0.2});
  CHECK(n.uh_ph == doctest::Approx(p.c_ph * 0.5 / std::pow(p.A_h, 1.5)));
  CHECK(n.uh_tr == doctest::Approx(p.c_tr * 0.25 / std::pow(p.A_r, 1.5)));
  CHECK(n.U_b == doctest::Approx(p.c_b * 0.2));

  const auto cmd = ValveCommand::from_common(-0.4, 0.1);
  CHECK(cmd.u_ph == 0.0);
  CHECK(cmd.u_tr == 0.0);
  CHECK(cmd.u_pr == 0.4);
  CHECK(cmd.u_th == 0.4);
  CHECK(cmd.u_b == 0.1);
}

TEST_CASE("closed-valve map") {
  const auto n = reference(0.0, 0.2);
  CHECK(gamma(n, 0.1) == Interval(-4.8e5, -4.8e5));
  CHECK(gamma(n, -0.1) == Interval(1.008e6, 1.008e6));
  const auto z = gamma(n, 0.0);
  CHECK(z.lo == -0.012 * 40e6);
  CHECK(z.hi == 0.024 * 42e6);
  CHECK(gamma_bounds_at_zero(n) == z);
}

TEST_CASE("zero-velocity bounds under U+") {
  const auto n = reference(0.5, 0.2);
  const auto p = n.params;
  const double third = p.A_h * p.Q * p.Q / (n.U_b * n.U_b);
  CHECK(third > 0.864e6);
  const auto z = gamma_bounds_at_zero(n);
  CHECK(z.lo == doctest::Approx(std::min({p.F_hM(), p.A_h * p.P_M, third})));
  CHECK(z.lo == doctest::Approx(0.864e6));
  CHECK(z.hi == doctest::Approx(p.F_hM()));

  // Bleed wide open: the supply pressure limit moves below A_h P_M.
  const auto wide = reference(0.5, 1.0);
  const double lim = wide.params.A_h * wide.params.Q * wide.params.Q / (wide.U_b * wide.U_b);
  CHECK(gamma_bounds_at_zero(wide).lo == doctest::Approx(std::min(0.864e6, lim)));
}

TEST_CASE("map range and monotonicity") {
  for (double uc : {-1.0, -0.5, -0.05, 0.0, 0.05, 0.5, 1.0}) {
    for (double ub : {0.0, 0.2, 0.7, 1.0}) {
      if (uc == 0.0 && ub == 0.0) continue;
      const auto n = reference(uc, ub);
      double prev_plus = INFINITY, prev_minus = INFINITY;
      for (double v : v_grid(-1.0, 1.0, 2001)) {
        const auto g = gamma(n, v);
        CHECK(g.lo >= -n.F_rM);
        CHECK(g.hi <= n.F_hM);
        if (v < 0) {
          CHECK(g.lo <= prev_minus);
          prev_minus = g.lo;
        } else if (v == 0) {
          CHECK(g.lo <= g.hi);
          CHECK(g.hi <= prev_minus);
          prev_plus = g.lo;
        } else {
          CHECK(g.lo <= prev_plus);
          prev_plus = g.lo;
        }
      }
    }
  }
}

TEST_CASE("continuity of the extending branch") {
  const auto n = reference(0.5, 0.2);
  const double dv = 1e-5;
  for (double v = dv; v < 0.5; v += dv) {
    // Largest segment slope on this range is bounded by 2|v|/min(u)^2 plus the supply term.
    const double jump = std::abs(gamma_plus(n, v + dv) - gamma_plus(n, v));
    CHECK(jump <= 2e7 * dv);
  }
}

TEST_CASE("oracle agreement across regimes") {
  const std::vector<ValveCommand> commands{
      ValveCommand::from_common(0.0, 0.2),   ValveCommand::from_common(0.0, 1.0),
      ValveCommand::from_common(0.5, 0.2),   ValveCommand::from_common(1.0, 0.7),
      ValveCommand::from_common(0.1, 0.0),   ValveCommand::from_common(-0.5, 0.2),
      ValveCommand::from_common(-1.0, 0.7),  ValveCommand::from_common(-0.1, 0.0),
      ValveCommand{0.0, 0.6, 0.0, 0.0, 0.3}, ValveCommand{0.0, 0.0, 0.6, 0.0, 0.3},
      ValveCommand{0.4, 0.0, 0.0, 0.0, 0.3}, ValveCommand{0.0, 0.0, 0.0, 0.4, 0.0},
  };
  const auto p = reference_params();
  for (const auto& cmd : commands) {
    const auto n = normalize(p, cmd);
    for (double v : v_grid(-0.5, 0.5, 401)) {
      const auto g = gamma(n, v);
      const auto o = nshyd::oracle::solve_inclusion(n, v);
      INFO("cmd " << cmd.u_ph << " " << cmd.u_tr << " " << cmd.u_pr << " " << cmd.u_th << " " << cmd.u_b
                  << " v=" << v);
      CHECK(std::abs(g.lo - o.lo) <= 1e-6 * n.F_hM);
      CHECK(std::abs(g.hi - o.hi) <= 1e-6 * n.F_hM);
    }
  }
}

TEST_CASE("lambda examples") {
  const auto n = reference(0.5, 0.2);
  const auto z = gamma_bounds_at_zero(n);
  CHECK(lambda(n, 1e6, 0.5 * (z.lo + z.hi)) == 0.0);
  CHECK(lambda(n, 1e6, z.lo) == 0.0);
  CHECK(lambda(n, 1e6, z.hi) == 0.0);
  CHECK(lambda(n, 1e6, 1.108e6) == doctest::Approx(-0.1));
  CHECK_THROWS_AS(lambda(n, 0.0, 1.0), nshyd::DomainError);
  CHECK_THROWS_AS(lambda(n, -1.0, 1.0), nshyd::DomainError);

  const auto closed = reference(0.0, 0.2);
  CHECK(lambda(closed, 1e6, -5.8e5) == doctest::Approx(0.1));
  CHECK(lambda(closed, 1e6, 1.108e6) == doctest::Approx(-0.1));
  CHECK(lambda(closed, 1e6, 0.0) == 0.0);
}

TEST_CASE("lambda inverse consistency on random inputs") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 5000; ++i) {
    const auto n = random_inputs(rng);
    const double beta = log_uniform(rng, 1e3, 1e9);
    const double fbar = uniform(rng, -2 * n.F_rM, 2 * n.F_hM);
    const double v = lambda(n, beta, fbar);
    const auto g = gamma(n, v);
    INFO("i=" << i << " regime " << to_string(n.regime) << " beta=" << beta << " fbar=" << fbar << " v=" << v
              << " gamma=[" << g.lo << ", " << g.hi << "]");
    CHECK(std::isfinite(v));
    CHECK(g.contains(beta * v + fbar, 1e-9 * std::max(1.0, std::abs(fbar))));
  }
}

TEST_CASE("round trip gamma then lambda") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 5000; ++i) {
    const auto n = random_inputs(rng);
    const double v = (uniform(rng, 0, 1) < 0.5 ? -1 : 1) * log_uniform(rng, 1e-4, 1.0);
    const double beta = log_uniform(rng, 1e3, 1e9);
    const double f = gamma(n, v).lo;
    const double back = lambda(n, beta, f - beta * v);
    INFO("regime " << to_string(n.regime) << " v=" << v << " beta=" << beta << " f=" << f);
    CHECK(std::abs(back - v) <= 1e-8 * std::max(1.0, std::abs(v)) + 1e-9 * std::abs(f) / beta);
  }
}

TEST_CASE("vertical flow-limit segment with the bleed valve shut") {
  const auto n = reference(0.5, 0.0);
  const double v = n.params.Q / n.params.A_h;
  const auto g = gamma(n, v);
  CHECK_FALSE(g.singleton());
  CHECK(g.hi == gamma_plus(n, std::nextafter(v, 0.0)));
  CHECK(g.lo == gamma_plus(n, std::nextafter(v, 1.0)));
  // Every force on the vertical piece resolves to the limit velocity.
  for (double f : {g.lo + 1.0, 0.5 * (g.lo + g.hi), g.hi - 1.0}) {
    CHECK(lambda(n, 1e5, f - 1e5 * v) == v);
  }
}

TEST_CASE("strict decrease where a segment with an open valve is active") {
  const auto n = reference(0.5, 0.2);
  const LatticeSpec spec{n.params.P_M, true};
  for (double v : v_grid(0.01, 0.5, 50)) {
    const auto seg = active_plus_segment(n, v, spec);
    if (seg == Segment::Plus0b || seg == Segment::RodRelief) continue;
    CHECK(gamma_plus(n, v + 1e-3) < gamma_plus(n, v));
  }
}

TEST_CASE("valve states") {
  auto row = [](Segment s) { return valve_states_for(s); };
  const auto o = ValveState::Open, x = ValveState::Closed;

  const auto n = reference(0.5, 0.2);
  const LatticeSpec spec{n.params.P_M, true};
  // Find a velocity where the pure rod-outflow segment is active.
  bool found = false;
  for (double v : v_grid(0.01, 3.0, 600)) {
    if (active_plus_segment(n, v, spec) != Segment::Plus3) continue;
    const auto r = valve_states(n, v, gamma_plus(n, v));
    CHECK(r.segment == Segment::Plus3);
    CHECK(r.rod_relief == x);
    CHECK(r.head_suction == o);
    found = true;
    break;
  }
  CHECK(found);

  const auto closed = reference(0.0, 0.2);
  const auto hold = valve_states(closed, 0.0, 1e5);
  CHECK(hold.segment == Segment::Holding);
  CHECK(hold.head_relief == x);
  CHECK(hold.head_suction == x);
  CHECK(hold.rod_suction == x);
  CHECK(hold.rod_relief == x);

  const auto relief = valve_states(closed, 0.2, -4.8e5);
  CHECK(relief.segment == Segment::RodRelief);
  CHECK(relief.rod_relief == o);

  CHECK_THROWS_AS(valve_states(closed, 0.2, 0.0), nshyd::InconsistencyError);
  CHECK_THROWS_AS(valve_states(closed, 0.0, 2e6), nshyd::InconsistencyError);
  CHECK_NOTHROW(valve_states(closed, 0.2, -4.8e5 * (1 + 5e-7)));

  CHECK(row(Segment::HeadRelief).head_relief == o);
  CHECK(row(Segment::Minus3).rod_suction == o);
  CHECK(row(Segment::Plus2a).pump_relief == o);
  CHECK(row(Segment::Plus1a).pump_relief == x);
}

TEST_CASE("valve state rows agree with the oracle's chamber forces") {
  // Relief open implies the chamber force sits at its limit; suction open
  // implies it is zero.
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const auto n = random_inputs(rng);
    const double v = uniform(rng, -0.5, 0.5);
    if (v == 0.0) continue;
    const auto g = gamma(n, v);
    const auto r = valve_states(n, v, g.lo);
    for (const auto& pt : nshyd::oracle::solve_points(n, v)) {
      if (r.head_relief == ValveState::Open) CHECK(pt.F_h == doctest::Approx(n.F_hM).epsilon(1e-6));
      if (r.rod_relief == ValveState::Open) CHECK(pt.F_r == doctest::Approx(n.F_rM).epsilon(1e-6));
      if (r.head_suction == ValveState::Open) CHECK(pt.F_h <= 1e-6 * n.F_hM);
      if (r.rod_suction == ValveState::Open) CHECK(pt.F_r <= 1e-6 * n.F_rM);
    }
  }
}
