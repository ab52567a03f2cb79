#include "nshyd/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "nshyd/errors.hpp"
#include "nshyd/multipump.hpp"

namespace nshyd::scenario {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& p : v) s += (s.empty() ? "" : "; ") + p;
  return s;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::invalid_argument("invalid scenario: " + join(problems)), problems_(std::move(problems)) {}

double Schedule::at(double t) const {
  const auto& p = points;
  if (t <= p.front().first) return p.front().second;
  if (t >= p.back().first) return p.back().second;
  const auto it = std::upper_bound(p.begin(), p.end(), t, [](double x, const auto& q) { return x < q.first; });
  const auto& [t1, y1] = *it;
  const auto& [t0, y0] = *(it - 1);
  if (interp == Interp::Constant) return y0;
  return y0 + (y1 - y0) * ((t - t0) / (t1 - t0));
}

actuator::ValveCommand CommandSpec::command() const {
  if (u_c) return actuator::ValveCommand::from_common(*u_c, u_b);
  actuator::ValveCommand c;
  c.u_ph = u_ph;
  c.u_tr = u_tr;
  c.u_pr = u_pr;
  c.u_th = u_th;
  c.u_b = u_b;
  return c;
}

actuator::ValveCommand ArmSpec::command(double t) const {
  if (u_c) return actuator::ValveCommand::from_common(u_c->at(t), u_b.at(t));
  actuator::ValveCommand c;
  c.u_ph = u_ph.at(t);
  c.u_tr = u_tr.at(t);
  c.u_pr = u_pr.at(t);
  c.u_th = u_th.at(t);
  c.u_b = u_b.at(t);
  return c;
}

namespace {

using Problems = std::vector<std::string>;

struct Unit {
  const char* suffix;
  double factor;
};
using Units = std::vector<Unit>;

const Units kArea{{"m2", 1.0}};
const Units kPressure{{"Pa", 1.0}, {"MPa", 1e6}};
const Units kFlow{{"m3_per_s", 1.0}, {"L_per_min", 1e-3 / 60.0}};
const Units kLength{{"m", 1.0}};
const Units kAngle{{"rad", 1.0}, {"deg", std::numbers::pi / 180.0}};
const Units kRate{{"rad_per_s", 1.0}, {"deg_per_s", std::numbers::pi / 180.0}};
const Units kMass{{"kg", 1.0}};
const Units kInertia{{"kg_m2", 1.0}};
const Units kAccel{{"m_per_s2", 1.0}};
const Units kStiffness{{"N_per_m", 1.0}};
const Units kViscosity{{"N_s_per_m", 1.0}};
const Units kForce{{"N", 1.0}};
const Units kTime{{"s", 1.0}};
const Units kVelocity{{"m_per_s", 1.0}};
const Units kDensity{{"kg_per_m3", 1.0}};
const Units kVelocitySq{{"m2_per_s2", 1.0}};

// One YAML mapping; remembers which keys were read so the rest can be
// reported as unknown.
class Block {
 public:
  Block(YAML::Node node, std::string path, Problems& problems)
      : node_(std::move(node)), path_(std::move(path)), problems_(&problems) {}

  bool present(const std::string& key) const { return node_[key].IsDefined() && !node_[key].IsNull(); }

  std::optional<double> number(const std::string& key) {
    used_.insert(key);
    if (!present(key)) return std::nullopt;
    return to_double(node_[key], where(key));
  }

  std::optional<double> quantity(const std::string& base, const Units& units) {
    std::optional<double> out;
    std::string found;
    for (const auto& u : units) {
      const std::string key = base + "_" + u.suffix;
      used_.insert(key);
      if (!present(key)) continue;
      if (out) {
        problem(where(key) + ": given together with " + found);
        continue;
      }
      if (auto x = to_double(node_[key], where(key))) {
        out = *x * u.factor;
        found = key;
      }
    }
    return out;
  }

  std::optional<int> integer(const std::string& key) {
    used_.insert(key);
    if (!present(key)) return std::nullopt;
    try {
      return node_[key].as<int>();
    } catch (const YAML::Exception&) {
      problem(where(key) + ": expected an integer");
      return std::nullopt;
    }
  }

  std::optional<std::string> text(const std::string& key) {
    used_.insert(key);
    if (!present(key)) return std::nullopt;
    if (!node_[key].IsScalar()) {
      problem(where(key) + ": expected a string");
      return std::nullopt;
    }
    return node_[key].as<std::string>();
  }

  std::optional<Block> child(const std::string& key) {
    used_.insert(key);
    if (!present(key)) return std::nullopt;
    if (!node_[key].IsMap()) {
      problem(where(key) + ": expected a mapping");
      return std::nullopt;
    }
    return Block(node_[key], where(key), *problems_);
  }

  YAML::Node raw(const std::string& key) {
    used_.insert(key);
    return node_[key];
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    used_.insert(key);
    if (!present(key)) return std::nullopt;
    return to_list(node_[key], where(key));
  }

  std::optional<std::vector<double>> quantities(const std::string& base, const Units& units) {
    std::optional<std::vector<double>> out;
    for (const auto& u : units) {
      const std::string key = base + "_" + u.suffix;
      used_.insert(key);
      if (!present(key)) continue;
      if (out) {
        problem(where(key) + ": unit given twice");
        continue;
      }
      if (auto v = to_list(node_[key], where(key))) {
        for (double& x : *v) x *= u.factor;
        out = std::move(*v);
      }
    }
    return out;
  }

  void finish() {
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.count(key)) problem(where(key) + ": unknown key");
    }
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  void problem(const std::string& msg) { problems_->push_back(msg); }
  Problems& problems() { return *problems_; }

 private:
  std::optional<double> to_double(const YAML::Node& n, const std::string& at) {
    try {
      if (!n.IsScalar()) throw YAML::Exception(YAML::Mark(), "");
      const double x = n.as<double>();
      if (!std::isfinite(x)) {
        problem(at + ": must be finite");
        return std::nullopt;
      }
      return x;
    } catch (const YAML::Exception&) {
      problem(at + ": expected a number");
      return std::nullopt;
    }
  }

  std::optional<std::vector<double>> to_list(const YAML::Node& n, const std::string& at) {
    if (!n.IsSequence()) {
      problem(at + ": expected a list of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) {
      auto x = to_double(n[i], at + "[" + std::to_string(i) + "]");
      if (!x) return std::nullopt;
      out.push_back(*x);
    }
    return out;
  }

  YAML::Node node_;
  std::string path_;
  Problems* problems_;
  std::set<std::string> used_;
};

void require_positive(Block& b, const std::string& key, double x) {
  if (!(x > 0.0)) b.problem(b.where(key) + ": must be positive");
}

actuator::ActuatorParams parse_actuator(Block b, double& density) {
  auto p = actuator::reference_params();
  auto set = [&](double& field, const std::string& base, const Units& u) {
    if (auto x = b.quantity(base, u)) field = *x;
    require_positive(b, base, field);
  };
  set(p.A_h, "A_h", kArea);
  set(p.A_r, "A_r", kArea);
  set(p.P_hM, "P_hM", kPressure);
  set(p.P_rM, "P_rM", kPressure);
  set(p.P_M, "P_M", kPressure);
  set(p.Q, "Q", kFlow);
  const double cd = b.number("discharge_coefficient").value_or(0.6);
  const double rho = b.quantity("density", kDensity).value_or(850.0);
  const double area = b.quantity("valve_area", kArea).value_or(1e-4);
  require_positive(b, "discharge_coefficient", cd);
  require_positive(b, "density", rho);
  require_positive(b, "valve_area", area);
  density = rho;
  std::map<std::string, double> areas{{"ph", area}, {"th", area}, {"pr", area}, {"tr", area}, {"b", area}};
  if (auto per = b.child("valve_areas_m2")) {
    for (auto& [name, a] : areas) {
      if (auto x = per->number(name)) {
        a = *x;
        require_positive(*per, name, a);
      }
    }
    per->finish();
  }
  if (cd > 0.0 && rho > 0.0) {
    auto coef = [&](const std::string& name) { return areas[name] > 0.0 ? actuator::orifice_coefficient(cd, areas[name], rho) : 0.0; };
    p.c_ph = coef("ph");
    p.c_th = coef("th");
    p.c_pr = coef("pr");
    p.c_tr = coef("tr");
    p.c_b = coef("b");
  }
  b.finish();
  return p;
}

RegenSpec parse_regen(Block b, double density) {
  const double cd = b.number("discharge_coefficient").value_or(0.6);
  const auto area = b.quantity("valve_area", kArea);
  require_positive(b, "discharge_coefficient", cd);
  RegenSpec r;
  if (!area) {
    b.problem(b.where("valve_area_m2") + ": required");
  } else {
    require_positive(b, "valve_area_m2", *area);
    if (*area > 0.0 && cd > 0.0) r.c_a = actuator::orifice_coefficient(cd, *area, density);
  }
  b.finish();
  return r;
}

SolverSpec parse_solver(Block b) {
  SolverSpec s;
  if (auto p = b.child("pressure")) {
    rootfind::RootConfig cfg;
    cfg.abs_tol = 1e-12 * 36e6;
    cfg.res_tol = 1e-15 * 500e-3 / 60.0;
    cfg.max_iter = 400;
    if (auto x = p->quantity("abs_tol", kPressure)) cfg.abs_tol = *x;
    if (auto x = p->quantity("res_tol", kFlow)) cfg.res_tol = *x;
    if (auto x = p->integer("max_iter")) cfg.max_iter = *x;
    if (auto m = p->text("method")) {
      if (*m == "illinois") cfg.method = rootfind::Method::Illinois;
      else if (*m == "bisection") cfg.method = rootfind::Method::Bisection;
      else p->problem(p->where("method") + ": expected illinois or bisection");
    }
    if (!(cfg.abs_tol > 0.0)) p->problem(p->where("abs_tol") + ": must be positive");
    if (!(cfg.res_tol > 0.0)) p->problem(p->where("res_tol") + ": must be positive");
    if (cfg.max_iter < 1) p->problem(p->where("max_iter") + ": must be at least 1");
    s.pressure.config = cfg;
    p->finish();
  }
  if (auto r = b.child("regen")) {
    if (auto x = r->quantity("eps_f", kForce)) s.regen.eps_f = *x;
    if (auto x = r->quantity("eps_v", kVelocitySq)) s.regen.eps_v = *x;
    if (auto x = r->integer("max_outer")) s.regen.max_outer = *x;
    require_positive(*r, "eps_f_N", s.regen.eps_f);
    require_positive(*r, "eps_v_m2_per_s2", s.regen.eps_v);
    if (s.regen.max_outer < 1) r->problem(r->where("max_outer") + ": must be at least 1");
    r->finish();
  }
  b.finish();
  return s;
}

void check_command(Block& b, const std::string& at, const CommandSpec& c) {
  if (c.u_c && !(*c.u_c >= -1.0 && *c.u_c <= 1.0)) b.problem(at + ".u_c: must lie in [-1, 1]");
  for (auto [name, x] : {std::pair{"u_ph", c.u_ph}, {"u_tr", c.u_tr}, {"u_pr", c.u_pr}, {"u_th", c.u_th},
                         {"u_b", c.u_b}, {"u_a", c.u_a}}) {
    if (!(x >= 0.0 && x <= 1.0)) b.problem(at + "." + name + ": must lie in [0, 1]");
  }
  try {
    (void)c.command().regime();
  } catch (const RegimeError& e) {
    b.problem(at + ": " + e.what());
  }
}

CommandSpec parse_command(Block b) {
  CommandSpec c;
  c.u_c = b.number("u_c");
  const bool direct = b.present("u_ph") || b.present("u_tr") || b.present("u_pr") || b.present("u_th");
  c.u_ph = b.number("u_ph").value_or(0.0);
  c.u_tr = b.number("u_tr").value_or(0.0);
  c.u_pr = b.number("u_pr").value_or(0.0);
  c.u_th = b.number("u_th").value_or(0.0);
  c.u_b = b.number("u_b").value_or(0.0);
  c.u_a = b.number("u_a").value_or(0.0);
  if (c.u_c && direct) b.problem(b.where("u_c") + ": give either u_c or the individual valve openings");
  b.finish();
  return c;
}

SweepSpec parse_sweep(Block b) {
  SweepSpec s;
  if (auto x = b.quantity("v_min", kVelocity)) s.v_min = *x;
  if (auto x = b.quantity("v_max", kVelocity)) s.v_max = *x;
  if (auto n = b.integer("n_points")) s.n_points = *n;
  if (s.n_points < 2) b.problem(b.where("n_points") + ": must be at least 2");
  if (!(s.v_min < s.v_max)) b.problem(b.where("v_max_m_per_s") + ": must exceed v_min_m_per_s");

  const YAML::Node list = b.raw("commands");
  if (list.IsDefined() && !list.IsNull()) {
    if (!list.IsSequence()) {
      b.problem(b.where("commands") + ": expected a list");
    } else {
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string at = b.where("commands") + "[" + std::to_string(i) + "]";
        if (!list[i].IsMap()) {
          b.problem(at + ": expected a mapping");
          continue;
        }
        s.commands.push_back(parse_command(Block(list[i], at, b.problems())));
      }
    }
  }
  if (auto g = b.child("command_grid")) {
    const auto uc = g->numbers("u_c");
    const auto ub = g->numbers("u_b").value_or(std::vector<double>{0.0});
    const auto ua = g->numbers("u_a").value_or(std::vector<double>{0.0});
    if (!uc) g->problem(g->where("u_c") + ": required");
    else
      for (double c : *uc)
        for (double bb : ub)
          for (double a : ua) s.commands.push_back(CommandSpec{c, 0, 0, 0, 0, bb, a});
    g->finish();
  }
  if (s.commands.empty()) b.problem(b.where("commands") + ": at least one command is required");
  for (std::size_t i = 0; i < s.commands.size(); ++i)
    check_command(b, b.where("commands") + "[" + std::to_string(i) + "]", s.commands[i]);

  if (auto sp = b.child("shared_pump")) {
    s.n_actuators = sp->integer("n_actuators").value_or(2);
    s.v_others = sp->quantities("v_others", kVelocity).value_or(std::vector<double>{0.0});
    if (s.n_actuators < 2) sp->problem(sp->where("n_actuators") + ": must be at least 2");
    if (s.v_others.empty()) sp->problem(sp->where("v_others_m_per_s") + ": must not be empty");
    sp->finish();
  }
  b.finish();
  return s;
}

std::optional<Schedule> parse_schedule(Block& parent, const std::string& base, const Units& units) {
  // Scalar value or {interpolation, t_s, values}.
  std::optional<Schedule> out;
  for (const auto& u : units) {
    const std::string key = *u.suffix ? base + "_" + u.suffix : base;
    const YAML::Node n = parent.raw(key);
    if (!n.IsDefined() || n.IsNull()) continue;
    const std::string at = parent.where(key);
    if (out) {
      parent.problem(at + ": unit given twice");
      continue;
    }
    if (n.IsScalar()) {
      try {
        out = Schedule::constant(n.as<double>() * u.factor);
      } catch (const YAML::Exception&) {
        parent.problem(at + ": expected a number or a schedule mapping");
      }
      continue;
    }
    if (!n.IsMap()) {
      parent.problem(at + ": expected a number or a schedule mapping");
      continue;
    }
    Block b(n, at, parent.problems());
    Schedule s;
    const auto interp = b.text("interpolation").value_or("constant");
    if (interp == "linear") s.interp = Schedule::Interp::Linear;
    else if (interp != "constant") b.problem(b.where("interpolation") + ": expected constant or linear");
    const auto t = b.numbers("t_s");
    const auto y = b.numbers("values");
    if (!t || !y) {
      b.problem(at + ": t_s and values are required");
    } else if (t->size() != y->size() || t->empty()) {
      b.problem(at + ": t_s and values must be non-empty and of equal length");
    } else {
      for (std::size_t i = 0; i < t->size(); ++i) {
        if (i > 0 && !((*t)[i] > (*t)[i - 1])) {
          b.problem(b.where("t_s") + ": time stamps must be strictly increasing");
          break;
        }
        s.points.emplace_back((*t)[i], (*y)[i] * u.factor);
      }
      if (s.points.size() == t->size()) out = s;
    }
    b.finish();
  }
  return out;
}

void check_range(Block& b, const std::string& key, const Schedule& s, double lo, double hi) {
  for (const auto& [t, y] : s.points) {
    if (!(y >= lo && y <= hi)) {
      b.problem(b.where(key) + (lo < 0.0 ? ": values must lie in [-1, 1]" : ": values must lie in [0, 1]"));
      return;
    }
  }
}

// Valve schedules are piecewise linear (or constant) between the merged break
// points, so a valve is open on an interval iff it is open at an end or the midpoint.
void check_arm_regimes(Block& b, const ArmSpec& a) {
  std::vector<double> ts;
  for (const Schedule* s : {&a.u_ph, &a.u_tr, &a.u_pr, &a.u_th, &a.u_b})
    for (const auto& p : s->points) ts.push_back(p.first);
  if (a.u_c)
    for (const auto& p : a.u_c->points) ts.push_back(p.first);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<double> probes = ts;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) probes.push_back(0.5 * (ts[i] + ts[i + 1]));
  probes.push_back(ts.front() - 1.0);
  probes.push_back(ts.back() + 1.0);
  for (double t : probes) {
    // Constant schedules jump at a stamp; check the left limit as well.
    for (double tt : {t, std::nextafter(t, -INFINITY)}) {
      try {
        (void)a.command(tt).regime();
      } catch (const RegimeError& e) {
        b.problem(b.where("schedules") + ": valve command outside the admissible regimes near t = " +
                  std::to_string(t) + " s (" + e.what() + ")");
        return;
      }
    }
  }
}

// pump_bleed: the shared pump's bleed schedule, which replaces the per-arm one.
ArmSpec parse_arm(Block b, const std::optional<Schedule>& pump_bleed) {
  ArmSpec a;
  if (auto x = b.quantity("theta0", kAngle)) a.theta0 = *x;
  if (auto x = b.quantity("thetadot0", kRate)) a.thetadot0 = *x;
  if (auto g = b.child("geometry")) {
    auto& m = a.arm;
    if (auto x = g->quantity("L_g", kLength)) m.L_g = *x;
    if (auto x = g->quantity("L_m", kLength)) m.L_m = *x;
    if (auto x = g->quantity("L_f", kLength)) m.L_f = *x;
    if (auto x = g->quantity("alpha", kAngle)) m.alpha = *x;
    if (auto x = g->quantity("M", kMass)) m.M = *x;
    if (auto x = g->quantity("J", kInertia)) m.J = *x;
    if (auto x = g->quantity("g", kAccel)) m.g = *x;
    if (auto rb = g->numbers("r_b_m")) {
      if (rb->size() != 2) g->problem(g->where("r_b_m") + ": expected [x, y]");
      else m.r_b = Eigen::Vector2d((*rb)[0], (*rb)[1]);
    }
    try {
      m.validate();
    } catch (const ConfigError& e) {
      g->problem(g->where("") + " " + e.what());
    }
    g->finish();
  }
  if (auto c = b.child("coupling")) {
    if (auto x = c->quantity("K", kStiffness)) a.K = *x;
    if (auto x = c->quantity("B", kViscosity)) a.B = *x;
    require_positive(*c, "K_N_per_m", a.K);
    require_positive(*c, "B_N_s_per_m", a.B);
    c->finish();
  }
  if (auto s = b.child("schedules")) {
    const Units plain{{"", 1.0}};
    a.u_c = parse_schedule(*s, "u_c", plain);
    bool direct = false;
    for (auto [name, field] : {std::pair{"u_ph", &a.u_ph}, {"u_tr", &a.u_tr}, {"u_pr", &a.u_pr}, {"u_th", &a.u_th}}) {
      if (auto x = parse_schedule(*s, name, plain)) {
        *field = *x;
        direct = true;
        check_range(*s, name, *x, 0.0, 1.0);
      }
    }
    if (a.u_c && direct) s->problem(s->where("u_c") + ": give either u_c or the individual valve schedules");
    if (a.u_c) check_range(*s, "u_c", *a.u_c, -1.0, 1.0);
    if (auto x = parse_schedule(*s, "u_b", plain)) {
      a.u_b = *x;
      check_range(*s, "u_b", *x, 0.0, 1.0);
      if (pump_bleed) s->problem(s->where("u_b") + ": set the bleed in simulate.shared_pump.u_b instead");
    }
    if (auto x = parse_schedule(*s, "u_a", plain)) {
      a.u_a = *x;
      check_range(*s, "u_a", *x, 0.0, 1.0);
    }
    if (auto x = parse_schedule(*s, "f_ey", kForce)) a.f_ey = *x;
    s->finish();
  }
  for (Schedule* s : {&a.u_ph, &a.u_tr, &a.u_pr, &a.u_th})
    if (s->points.empty()) *s = Schedule::constant(0.0);
  if (pump_bleed) a.u_b = *pump_bleed;
  check_arm_regimes(b, a);
  b.finish();
  return a;
}

SimulateSpec parse_simulate(Block b) {
  SimulateSpec s;
  const auto T = b.quantity("T", kTime);
  if (auto x = b.quantity("h", kTime)) s.h = *x;
  if (!T) b.problem(b.where("T_s") + ": required");
  else s.T = *T;
  require_positive(b, "T_s", s.T);
  require_positive(b, "h_s", s.h);
  if (s.T > 0.0 && s.h > 0.0) {
    const double n = std::round(s.T / s.h);
    if (n < 1.0 || std::abs(n * s.h - s.T) > 1e-9 * s.T) b.problem(b.where("T_s") + ": must be a positive multiple of h_s");
  }
  if (auto e = b.integer("output_every")) s.every = *e;
  if (s.every < 1) b.problem(b.where("output_every") + ": must be at least 1");

  std::optional<Schedule> pump_bleed;
  if (auto sp = b.child("shared_pump")) {
    s.shared_pump = true;
    if (auto x = parse_schedule(*sp, "u_b", {{"", 1.0}})) {
      s.pump_u_b = *x;
      check_range(*sp, "u_b", *x, 0.0, 1.0);
    }
    sp->finish();
    pump_bleed = s.pump_u_b;
  }
  const YAML::Node arms = b.raw("arms");
  if (!arms.IsDefined() || !arms.IsSequence() || arms.size() == 0) {
    b.problem(b.where("arms") + ": a non-empty list is required");
  } else {
    for (std::size_t i = 0; i < arms.size(); ++i) {
      const std::string at = b.where("arms") + "[" + std::to_string(i) + "]";
      if (!arms[i].IsMap()) {
        b.problem(at + ": expected a mapping");
        continue;
      }
      s.arms.push_back(parse_arm(Block(arms[i], at, b.problems()), pump_bleed));
    }
  }
  b.finish();
  return s;
}

}  // namespace

Scenario parse(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ValidationError({std::string("YAML syntax: ") + e.what()});
  }
  if (!root.IsMap()) throw ValidationError({"top level: expected a mapping"});

  Problems problems;
  Block top(root, "", problems);
  Scenario sc;
  const auto mode = top.text("mode");
  if (!mode) top.problem("mode: required (sweep or simulate)");
  else if (*mode == "sweep") sc.mode = Mode::Sweep;
  else if (*mode == "simulate") sc.mode = Mode::Simulate;
  else top.problem("mode: expected sweep or simulate");

  double density = 850.0;
  if (auto a = top.child("actuator")) sc.actuator = parse_actuator(*a, density);
  if (auto r = top.child("regen")) sc.regen = parse_regen(*r, density);
  if (auto s = top.child("solver")) sc.solver = parse_solver(*s);

  if (auto o = top.child("output")) {
    sc.output.path = o->text("path").value_or("");
    const YAML::Node cols = o->raw("columns");
    if (cols.IsDefined() && !cols.IsNull()) {
      if (!cols.IsSequence()) o->problem(o->where("columns") + ": expected a list of names");
      else
        for (const auto& c : cols) sc.output.columns.push_back(c.as<std::string>());
    }
    o->finish();
  }

  const bool sweep = mode && *mode == "sweep";
  const bool simulate = mode && *mode == "simulate";
  if (auto s = top.child("sweep")) {
    if (!sweep) top.problem("sweep: only allowed with mode: sweep");
    sc.sweep = parse_sweep(*s);
  } else if (sweep) {
    top.problem("sweep: required with mode: sweep");
  }
  if (auto s = top.child("simulate")) {
    if (!simulate) top.problem("simulate: only allowed with mode: simulate");
    sc.simulate = parse_simulate(*s);
  } else if (simulate) {
    top.problem("simulate: required with mode: simulate");
  }
  top.finish();

  // Cross-block checks.
  if (problems.empty()) {
    try {
      sc.actuator.validate();
    } catch (const ConfigError& e) {
      problems.push_back(std::string("actuator: ") + e.what());
    }
    if (sc.regen) {
      regen::RegenParams rp{sc.actuator, sc.regen->c_a, 0.0};
      try {
        rp.validate();
      } catch (const ConfigError& e) {
        problems.push_back(std::string("regen: ") + e.what());
      }
    }
    const bool shared = (sweep && sc.sweep.n_actuators > 1) || (simulate && sc.simulate.shared_pump);
    if (shared && sc.regen) problems.push_back("regen: not supported together with a shared pump");
    if (shared) {
      const auto& p = sc.actuator;
      if (p.P_M > p.P_hM || p.P_M > p.P_rM)
        problems.push_back("actuator.P_M: shared pump requires P_M <= P_hM and P_M <= P_rM");
    }
    auto needs_regen = [&](const std::string& at, bool open) {
      if (open && !sc.regen) problems.push_back(at + ".u_a: regeneration valve opened but no regen block given");
    };
    if (sweep)
      for (std::size_t i = 0; i < sc.sweep.commands.size(); ++i)
        needs_regen("sweep.commands[" + std::to_string(i) + "]", sc.sweep.commands[i].u_a > 0.0);
    if (simulate)
      for (std::size_t i = 0; i < sc.simulate.arms.size(); ++i) {
        const auto& pts = sc.simulate.arms[i].u_a.points;
        needs_regen("simulate.arms[" + std::to_string(i) + "].schedules",
                    std::any_of(pts.begin(), pts.end(), [](const auto& q) { return q.second > 0.0; }));
      }
    const auto all = available_columns(sc);
    for (const auto& c : sc.output.columns)
      if (std::find(all.begin(), all.end(), c) == all.end()) problems.push_back("output.columns: unknown column '" + c + "'");
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return sc;
}

std::vector<std::string> available_columns(const Scenario& sc) {
  std::vector<std::string> c;
  if (sc.mode == Mode::Sweep) {
    const bool shared = sc.sweep.n_actuators > 1;
    c = {"command", "u_ph", "u_tr", "u_pr", "u_th", "u_b"};
    if (sc.regen) c.push_back("u_a");
    if (shared) c.push_back("v_others");
    for (const char* x : {"v", "f_lo", "f_hi"}) c.push_back(x);
    if (sc.regen) c.push_back("v_a");
    if (shared) c.insert(c.end(), {"P", "xi_P"});
    return c;
  }
  c.push_back("t");
  const std::size_t n = sc.simulate.arms.size();
  for (std::size_t j = 0; j < n; ++j) {
    const std::string suffix = n > 1 ? "_" + std::to_string(j + 1) : "";
    for (const char* x : {"theta", "thetadot", "v", "f", "p", "ell", "p_minus_ell"}) c.push_back(x + suffix);
  }
  if (sc.simulate.shared_pump) c.insert(c.end(), {"P", "relief_flow"});
  return c;
}

Scenario load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError({"cannot read scenario file '" + path + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace nshyd::scenario
