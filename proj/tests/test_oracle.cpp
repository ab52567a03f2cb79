#include "doctest.h"
#include "nshyd/errors.hpp"
#include "nshyd/oracle.hpp"
#include "random_inputs.hpp"

using namespace nshyd;
using actuator::ValveCommand;

namespace {

actuator::NormalizedInputs reference(double u_c, double u_b) {
  return actuator::normalize(actuator::reference_params(), ValveCommand::from_common(u_c, u_b));
}

}  // namespace

TEST_CASE("closed valves hold any force between the relief limits") {
  const auto o = oracle::solve_inclusion(reference(0.0, 0.2), 0.0);
  CHECK(o.lo == doctest::Approx(-4.8e5).epsilon(1e-12));
  CHECK(o.hi == doctest::Approx(1.008e6).epsilon(1e-12));
}

TEST_CASE("closed valves while moving sit on a relief limit") {
  const auto n = reference(0.0, 0.2);
  CHECK(oracle::solve_inclusion(n, 0.1) == actuator::Interval(-4.8e5, -4.8e5));
  CHECK(oracle::solve_inclusion(n, -0.1) == actuator::Interval(1.008e6, 1.008e6));
}

TEST_CASE("matches the analytic map at the documented points") {
  const auto up = reference(0.5, 0.2);
  const auto o1 = oracle::solve_inclusion(up, 0.2);
  CHECK(o1.singleton());
  CHECK(o1.lo == doctest::Approx(actuator::gamma(up, 0.2).lo).epsilon(1e-6));
  const auto down = reference(-0.5, 0.2);
  const auto o2 = oracle::solve_inclusion(down, -0.2);
  CHECK(o2.lo == doctest::Approx(actuator::gamma(down, -0.2).lo).epsilon(1e-6));
  const auto z = oracle::solve_inclusion(up, 0.0);
  CHECK(z.lo == doctest::Approx(0.864e6).epsilon(1e-9));
  CHECK(z.hi == doctest::Approx(1.008e6).epsilon(1e-9));
}

TEST_CASE("solutions satisfy every relation and respect the bounds") {
  std::mt19937_64 rng(31);
  int points = 0;
  for (int i = 0; i < 400; ++i) {
    const auto n = test::random_inputs(rng);
    const double v = i % 5 == 0 ? 0.0 : test::uniform(rng, -0.6, 0.6);
    const auto pts = oracle::solve_points(n, v);
    for (const auto& pt : pts) {
      ++points;
      CHECK(pt.F_h >= 0.0);
      CHECK(pt.F_h <= n.F_hM);
      CHECK(pt.F_r >= 0.0);
      CHECK(pt.F_r <= n.F_rM);
      CHECK(pt.P <= n.params.P_M);
      for (double r : pt.residuals) CHECK(r < 1e-6);
    }
    if (v != 0.0) {
      const auto hull = oracle::solve_inclusion(n, v);
      const bool vertical = n.U_b == 0.0 && (v == n.params.Q / n.params.A_h || v == -n.params.Q / n.params.A_r);
      if (!vertical) CHECK(hull.width() <= 1e-6 * n.F_hM);
    }
  }
  CHECK(points > 400);
}

TEST_CASE("residuals flag inconsistent points") {
  const auto n = reference(0.0, 0.2);
  // Bleed alone cannot pass Q below P_M, so the pump relief is open.
  const auto r = oracle::residuals(n, 0.1, 0.0, 4.8e5, 36e6, 36e6, -4.8e5);
  for (double x : r) CHECK(x < 1e-12);
  // Rod chamber below its relief limit cannot pass positive velocity with closed valves.
  const auto bad = oracle::residuals(n, 0.1, 0.0, 1e5, 36e6, 36e6, -1e5);
  CHECK(bad[1] > 0.0);
  const auto above = oracle::residuals(n, 0.1, 0.0, 4.8e5, 40e6, 40e6, -4.8e5);
  const auto starved = oracle::residuals(n, 0.1, 0.0, 4.8e5, 36e6, 0.0, -4.8e5);
  CHECK(starved[3] == doctest::Approx(1.0));
  CHECK(above[3] == INFINITY);
  const auto sum = oracle::residuals(n, 0.1, 0.0, 4.8e5, 36e6, 36e6, 0.0);
  CHECK(sum[4] == doctest::Approx(4.8e5));
}
