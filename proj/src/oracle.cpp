#include "nshyd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "nshyd/errors.hpp"

namespace nshyd::oracle {

using nonsmooth::Interval;
using nonsmooth::r_signed;
using nonsmooth::s_signed;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Root of a nonincreasing g on [lo, hi] with g(lo) > 0 > g(hi), to machine precision.
double bisect_decreasing(const std::function<double(double)>& g, double lo, double hi) {
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Solution set of  g(F) in N_[0, Fmax](F)  for nonincreasing g, enumerating the
// three complementarity branches (F = 0 with g <= 0, F = Fmax with g >= 0,
// interior with g = 0).
Interval chamber_force(const std::function<double(double)>& g, double Fmax) {
  const double g0 = g(0.0);
  const double gM = g(Fmax);
  double lo = kInf, hi = -kInf;
  auto take = [&](double F) {
    lo = std::min(lo, F);
    hi = std::max(hi, F);
  };
  if (g0 <= 0.0) take(0.0);
  if (gM >= 0.0) take(Fmax);
  if (g0 == 0.0 && gM == 0.0) {
    // Flat at zero: every interior point is a solution.
    take(0.0);
    take(Fmax);
  } else if (g0 > 0.0 && gM < 0.0) {
    take(bisect_decreasing(g, 0.0, Fmax));
  }
  if (lo > hi) throw InfeasibleError("oracle: chamber relation has no branch");
  return {lo, hi};
}

struct Model {
  const NormalizedInputs& n;
  double v;
  double Q;
  double A_h, A_r;
  double tol;  // absolute flow tolerance

  double g_head(double F_h, double P_c) const {
    return -v + n.uh_ph * r_signed(A_h * P_c - F_h) - n.uh_th * r_signed(F_h);
  }
  double g_rod(double F_r, double P_c) const {
    return v + n.uh_pr * r_signed(A_r * P_c - F_r) - n.uh_tr * r_signed(F_r);
  }
  Interval head(double P_c) const {
    return chamber_force([&](double F) { return g_head(F, P_c); }, n.F_hM);
  }
  Interval rod(double P_c) const {
    return chamber_force([&](double F) { return g_rod(F, P_c); }, n.F_rM);
  }
  // Pump-to-actuator flow. The chamber force is set-valued only when both of
  // its valves are closed, in which case it does not enter this sum.
  double q_p(double P_c) const {
    double q = 0.0;
    if (n.uh_ph > 0.0) q += A_h * n.uh_ph * r_signed(A_h * P_c - head(P_c).lo);
    if (n.uh_pr > 0.0) q += A_r * n.uh_pr * r_signed(A_r * P_c - rod(P_c).lo);
    return q;
  }
  double bleed(double P) const { return n.U_b * r_signed(P); }
};

// A monotone constraint on P_c: holds for P_c >= threshold (rising) or
// P_c <= threshold (falling).
struct Constraint {
  std::function<bool(double)> holds;
  bool rising;
};

// Feasible P_c interval inside [-W, W] for a set of monotone constraints.
std::optional<Interval> feasible_range(const std::vector<Constraint>& cs, double W) {
  double lo = -W, hi = W;
  for (const auto& c : cs) {
    if (c.rising) {
      if (!c.holds(W)) return std::nullopt;
      if (c.holds(-W)) continue;
      double a = -W, b = W;  // !holds(a), holds(b)
      for (int i = 0; i < 2000; ++i) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        if (c.holds(m)) b = m; else a = m;
      }
      lo = std::max(lo, b);
    } else {
      if (!c.holds(-W)) return std::nullopt;
      if (c.holds(W)) continue;
      double a = -W, b = W;  // holds(a), !holds(b)
      for (int i = 0; i < 2000; ++i) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        if (c.holds(m)) a = m; else b = m;
      }
      hi = std::min(hi, a);
    }
  }
  if (lo > hi) return std::nullopt;
  return Interval{lo, hi};
}

double cone_distance(double y, double x, double lo, double hi) {
  if (x < lo || x > hi) return kInf;
  double d = 0.0;
  if (x > lo && x < hi) d = std::abs(y);
  else if (lo == hi) d = 0.0;
  else if (x == lo) d = std::max(y, 0.0);
  else d = std::max(-y, 0.0);
  return d;
}

}  // namespace

std::array<double, 5> residuals(const NormalizedInputs& n, double v, double F_h, double F_r, double P_c,
                                double P, double f) {
  const auto& p = n.params;
  const Model m{n, v, p.Q, p.A_h, p.A_r, 0.0};
  const double q_ph = p.A_h * n.uh_ph * r_signed(p.A_h * P_c - F_h);
  const double q_pr = p.A_r * n.uh_pr * r_signed(p.A_r * P_c - F_r);
  const double Qp = q_ph + q_pr;

  std::array<double, 5> r{};
  r[0] = cone_distance(m.g_head(F_h, P_c), F_h, 0.0, n.F_hM);
  r[1] = cone_distance(m.g_rod(F_r, P_c), F_r, 0.0, n.F_rM);
  // N_(-inf, P_c](P) and N_(-inf, P_M](P) as distances on a half line.
  r[2] = (P > P_c ? kInf : P < P_c ? std::abs(Qp) : std::max(-Qp, 0.0)) / p.Q;
  const double node = p.Q - m.bleed(P) - Qp;
  r[3] = (P > p.P_M ? kInf : P < p.P_M ? std::abs(node) : std::max(-node, 0.0)) / p.Q;
  r[4] = std::abs(f - (F_h - F_r));
  return r;
}

std::vector<ResidualPoint> solve_points(const NormalizedInputs& n, double v, const OracleConfig& cfg) {
  const auto& p = n.params;
  const Model m{n, v, p.Q, p.A_h, p.A_r, cfg.flow_tol_rel * p.Q};

  // Search window for P_c: generous multiple of any pressure the circuit can
  // need to push |v| plus the full supply through the smallest open valve.
  double W = std::max({p.P_hM, p.P_rM, p.P_M});
  const double flow = std::abs(v) + p.Q / p.A_r + p.Q / p.A_h;
  for (double u : {n.uh_ph, n.uh_pr}) {
    if (u > 0.0) W += s_signed(flow / u) / std::min(p.A_h, p.A_r);
  }
  if (n.U_b > 0.0) W = std::max(W, s_signed(p.Q / n.U_b));
  W *= 4.0;

  auto node = [&](double P_c) { return p.Q - m.bleed(P_c) - m.q_p(P_c); };
  const Constraint qp_nonneg{[&](double x) { return m.q_p(x) >= -m.tol; }, true};
  const Constraint qp_nonpos{[&](double x) { return m.q_p(x) <= m.tol; }, false};
  auto at_least = [](double c) { return Constraint{[c](double x) { return x >= c; }, true}; };

  std::vector<ResidualPoint> out;
  auto emit = [&](double P_c, double P) {
    const Interval Fh = m.head(P_c);
    const Interval Fr = m.rod(P_c);
    for (double F_h : {Fh.lo, Fh.hi}) {
      for (double F_r : {Fr.lo, Fr.hi}) {
        ResidualPoint pt{F_h, F_r, P_c, P, {}};
        pt.residuals = residuals(n, v, F_h, F_r, P_c, P, F_h - F_r);
        out.push_back(pt);
      }
    }
  };
  auto sweep = [&](const Interval& range, const std::function<double(double)>& pressure) {
    const int k = range.singleton() ? 1 : std::max(2, cfg.samples);
    for (int i = 0; i < k; ++i) {
      const double P_c = k == 1 ? range.lo : range.lo + (range.hi - range.lo) * i / (k - 1);
      emit(P_c, pressure(P_c));
    }
  };

  // Check valve open (P = P_c, Q_p >= 0), relief closed (P <= P_M): the node
  // balance is strictly decreasing in P_c whenever it can vanish.
  if (node(-W) > 0.0 && node(W) < 0.0) {
    const double P_c = bisect_decreasing(node, -W, W);
    if (P_c <= p.P_M && m.q_p(P_c) >= -m.tol) emit(P_c, P_c);
  }
  // Check open, relief open: P = P_c = P_M with surplus flow relieved.
  if (m.q_p(p.P_M) >= -m.tol && node(p.P_M) >= -m.tol) emit(p.P_M, p.P_M);
  // Check closed (Q_p = 0, P <= P_c), relief closed: bleed carries all of Q.
  if (n.U_b > 0.0) {
    const double P = s_signed(p.Q / n.U_b);
    if (P <= p.P_M) {
      if (auto r = feasible_range({qp_nonneg, qp_nonpos, at_least(P)}, W)) {
        sweep(*r, [P](double) { return P; });
      }
    }
  }
  // Check closed, relief open: P = P_M <= P_c.
  if (p.Q - m.bleed(p.P_M) >= -m.tol) {
    if (auto r = feasible_range({qp_nonneg, qp_nonpos, at_least(p.P_M)}, W)) {
      sweep(*r, [&](double) { return p.P_M; });
    }
  }

  if (out.empty()) throw InfeasibleError("oracle: no consistent branch combination");
  return out;
}

ForceInterval solve_inclusion(const NormalizedInputs& n, double v, const OracleConfig& cfg) {
  const auto pts = solve_points(n, v, cfg);
  double lo = kInf, hi = -kInf;
  for (const auto& pt : pts) {
    lo = std::min(lo, pt.f());
    hi = std::max(hi, pt.f());
  }
  return {lo, hi};
}

}  // namespace nshyd::oracle
