#include "usv/engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "usv/geometry.hpp"
#include "usv/ode.hpp"

namespace usv::engine {

using dynamics::VesselState;

Vec2 TargetTrajectory::position(double t) const {
  switch (kind) {
    case Kind::Static:
      return start;
    case Kind::ConstantVelocity:
      return start + t * velocity;
    case Kind::Waypoints: {
      if (waypoints.empty()) return start;
      Vec2 at = waypoints.front().position;
      double remaining = t;
      for (std::size_t k = 1; k < waypoints.size(); ++k) {
        const Vec2 leg = waypoints[k].position - at;
        const double len = leg.norm();
        const double need = len / waypoints[k].speed;
        if (remaining <= need) return at + leg * (remaining / need);
        remaining -= need;
        at = waypoints[k].position;
      }
      return at;
    }
  }
  return start;
}

void TargetTrajectory::validate() const {
  if (!start.allFinite() || !velocity.allFinite()) {
    throw std::invalid_argument("target: non-finite start or velocity");
  }
  if (kind == Kind::Waypoints) {
    if (waypoints.empty()) throw std::invalid_argument("target: waypoint list is empty");
    for (std::size_t k = 1; k < waypoints.size(); ++k) {
      if (!(waypoints[k].speed > 0.0)) {
        throw std::invalid_argument("target: waypoint speed must be positive");
      }
    }
  }
}

std::string to_string(Approach a) {
  switch (a) {
    case Approach::A1Centralized:
      return "approach1-centralized";
    case Approach::A1Decentralized:
      return "approach1-decentralized";
    case Approach::A2:
      return "approach2";
  }
  return "?";
}

std::string to_string(Regulator r) { return r == Regulator::Pid ? "pid" : "backstepping"; }

std::optional<Approach> approach_from_string(const std::string& s) {
  for (Approach a : {Approach::A1Centralized, Approach::A1Decentralized, Approach::A2}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

std::optional<Regulator> regulator_from_string(const std::string& s) {
  if (s == "backstepping") return Regulator::Backstepping;
  if (s == "pid") return Regulator::Pid;
  return std::nullopt;
}

dynamics::DynamicsParams vessel_model() {
  auto p = dynamics::DynamicsParams::identified();
  p.k5 = p.k5 * 180.0 / kPi;
  p.tau1_range = {-11000.0, 11000.0};
  return p;
}

namespace {

std::size_t ratio(double big, double small, const char* what) {
  const double q = big / small;
  const double n = std::round(q);
  if (n < 1.0 || std::abs(q - n) > 1e-9 * n) {
    throw std::invalid_argument(std::string("scenario: ") + what);
  }
  return static_cast<std::size_t>(n);
}

// Uniform double in [0, 1) from the top 53 bits; avoids implementation
// defined distribution algorithms so traces match across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::size_t Scenario::substeps() const {
  return ratio(dt_ctrl, dt_phys, "dt_ctrl must be an integer multiple of dt_phys");
}

std::size_t Scenario::reg_substeps() const {
  return ratio(dt_reg, dt_phys, "dt_reg must be an integer multiple of dt_phys");
}

void Scenario::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("scenario: " + m); };
  if (!(duration > 0.0) || !std::isfinite(duration)) fail("duration must be positive");
  if (!(dt_phys > 0.0)) fail("dt_phys must be positive");
  if (!(dt_ctrl > 0.0)) fail("dt_ctrl must be positive");
  if (!(dt_reg > 0.0)) fail("dt_reg must be positive");
  if (!(ref_tau > 0.0)) fail("ref_tau must be positive");
  if (!(u_min >= 0.0)) fail("u_min must be non-negative");
  substeps();
  const std::size_t nreg = reg_substeps();
  if (substeps() % nreg != 0) fail("dt_ctrl must be an integer multiple of dt_reg");
  const std::size_t n = vessels.empty() ? random_count : vessels.size();
  if (n < 3) fail("at least 3 vessels are required");
  if (swarm.n != n) fail("swarm.n differs from the vessel count");
  for (const auto& v : vessels)
    if (!v.finite()) fail("initial vessel state is not finite");
  if (vessels.empty() && !(area.lo.x() < area.hi.x() && area.lo.y() < area.hi.y())) {
    fail("placement area is empty");
  }
  swarm.validate(approach == Approach::A1Decentralized);
  params.validate();
  target.validate();
}

std::vector<VesselState> Scenario::initial_states() const {
  if (!vessels.empty()) return vessels;
  std::mt19937_64 rng(seed);
  std::vector<VesselState> out(random_count);
  for (auto& s : out) {
    const double ux = unit(rng), uy = unit(rng), uh = unit(rng);
    s.position = Vec2(area.lo.x() + ux * (area.hi.x() - area.lo.x()),
                      area.lo.y() + uy * (area.hi.y() - area.lo.y()));
    s.heading = -kPi + uh * kTwoPi;
  }
  return out;
}

std::vector<double> adjacent_gaps(const std::vector<double>& thetas) {
  std::vector<double> a;
  for (double th : thetas) {
    double w = std::fmod(th, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    a.push_back(w);
  }
  std::sort(a.begin(), a.end());
  std::vector<double> gaps;
  for (std::size_t k = 0; k + 1 < a.size(); ++k) gaps.push_back(a[k + 1] - a[k]);
  if (!a.empty()) gaps.push_back(a.front() + kTwoPi - a.back());
  return gaps;
}

namespace {

void fill_monitors(TraceRecord& rec, const protocols::SwarmConfig& swarm) {
  std::vector<Vec2> pos;
  std::vector<double> th;
  for (const auto& v : rec.vessels) {
    pos.push_back(v.state.position);
    th.push_back(v.theta);
  }
  rec.hull_distance = geometry::hull_distance(rec.target, pos);
  rec.V = protocols::lyapunov_V(pos, rec.target, swarm);
  rec.P = protocols::lyapunov_P(th, swarm);
  rec.theta_ij.clear();
  for (std::size_t i = 0; i < th.size(); ++i)
    for (std::size_t j = i + 1; j < th.size(); ++j)
      rec.theta_ij.push_back(geometry::wrapped_diff(th[i], th[j]).value());
}

}  // namespace

RunResult run(const Scenario& sc) {
  sc.validate();
  const bool a1 = sc.approach != Approach::A2;
  const bool decentralized = sc.approach == Approach::A1Decentralized;
  std::vector<VesselState> states = sc.initial_states();
  const std::size_t n = states.size();
  const auto& swarm = sc.swarm;

  protocols::EstimatorState est;
  for (const auto& s : states) est.y.push_back(s.position);

  std::vector<conversion::ReferenceShaper> shapers;
  std::vector<conversion::CourseReference> course(n);
  for (std::size_t i = 0; i < n; ++i) {
    shapers.emplace_back(sc.ref_tau, states[i]);
    course[i] = {states[i].surge, states[i].heading};
  }
  std::vector<std::optional<double>> theta_prev(n);
  std::vector<double> rho(n, 0.0), theta(n, 0.0);
  std::vector<regulation::RegulatorState> reg(n);
  std::vector<dynamics::SaturatedCommand> applied(n);
  std::vector<bool> infeasible(n, false), held(n, false);

  const std::size_t nsub = sc.substeps();
  const std::size_t nreg = sc.reg_substeps();
  const double dt_reg = static_cast<double>(nreg) * sc.dt_phys;
  const auto ticks = static_cast<long>(std::llround(sc.duration / sc.dt_ctrl));

  auto regulate = [&](std::size_t i) {
    const auto ref = shapers[i].signal(states[i].sway);
    dynamics::ActuatorCommand u;
    if (sc.regulator == Regulator::Backstepping) {
      auto [tau1, next] = regulation::backstepping_tau1(states[i], ref, reg[i], sc.gains,
                                                        sc.params, dt_reg);
      u.tau1 = tau1;
      reg[i] = next;
      u.tau2 = regulation::backstepping_tau2(states[i], ref, sc.gains, sc.params);
    } else {
      auto [tau1, next] = regulation::pid_tau1(states[i], ref, reg[i], sc.gains, sc.params, dt_reg);
      u.tau1 = tau1;
      reg[i] = next;
      u.tau2 = regulation::pid_tau2(states[i], ref, sc.gains, sc.params);
    }
    applied[i] = dynamics::saturate(u, sc.params);
  };

  RunResult result;
  result.trace.reserve(static_cast<std::size_t>(ticks) + 1);
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * sc.dt_ctrl;
    const Vec2 xo = sc.target.position(t);
    std::vector<Vec2> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = states[i].position;

    // sense
    std::vector<bool> degenerate(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      rho[i] = (pos[i] - xo).norm();
      if (auto ps = conversion::cartesian_to_polar(pos[i], xo, theta_prev[i], swarm.rho_min)) {
        theta[i] = ps->theta;
        theta_prev[i] = ps->theta;
      } else {
        degenerate[i] = true;
      }
    }
    // estimate
    if (decentralized && k > 0) est = protocols::estimator_step(est, xo, swarm, sc.dt_ctrl);
    // protocol, convert
    for (std::size_t i = 0; i < n; ++i) {
      infeasible[i] = false;
      held[i] = false;
      Vec2 ur;
      if (a1) {
        ur = protocols::surrounding_control(pos, i, decentralized ? est.y[i] : xo, swarm);
      } else {
        const auto pc = protocols::equal_surround_control({rho[i], theta[i]}, i, theta, swarm);
        if (!pc || degenerate[i]) {
          held[i] = true;
          shapers[i].set_command(course[i]);
          continue;
        }
        ur = conversion::polar_to_cartesian_command(pc->eta_r, pc->omega_r, rho[i], theta[i]);
      }
      const auto cc = conversion::resolve_course(ur, states[i].sway, shapers[i].psi_r(), sc.u_min);
      course[i] = cc.ref;
      infeasible[i] = cc.infeasible;
      held[i] = cc.held;
      shapers[i].set_command(course[i]);
    }
    for (std::size_t i = 0; i < n; ++i) regulate(i);

    TraceRecord rec;
    rec.t = t;
    rec.target = xo;
    for (std::size_t i = 0; i < n; ++i) {
      VesselTrace vt;
      vt.state = states[i];
      vt.command = applied[i].command;
      vt.tau1_saturated = applied[i].tau1_saturated;
      vt.tau2_saturated = applied[i].tau2_saturated;
      vt.ref = shapers[i].signal(states[i].sway);
      vt.pert = conversion::perturbation(states[i], vt.ref, rho[i], theta[i]);
      vt.estimate = decentralized ? est.y[i] : xo;
      vt.rho = rho[i];
      vt.theta = theta[i];
      vt.infeasible = infeasible[i];
      vt.held = held[i];
      rec.vessels.push_back(vt);
    }
    fill_monitors(rec, swarm);
    result.trace.push_back(std::move(rec));
    if (k == ticks) break;

    for (std::size_t sub = 0; sub < nsub; ++sub) {
      if (sub > 0 && sub % nreg == 0)
        for (std::size_t i = 0; i < n; ++i) regulate(i);
      const double ts = t + static_cast<double>(sub) * sc.dt_phys;
      for (std::size_t i = 0; i < n; ++i) {
        states[i] = dynamics::step(states[i], applied[i].command, sc.params, sc.dt_phys, ts, i);
        shapers[i].advance(sc.dt_phys);
      }
    }
  }
  result.outcome = detect_outcomes(result.trace, swarm, sc.thresholds);
  return result;
}

OutcomeReport detect_outcomes(const std::vector<TraceRecord>& trace,
                              const protocols::SwarmConfig& swarm, const Thresholds& th) {
  if (trace.empty()) throw std::invalid_argument("detect_outcomes: empty trace");
  OutcomeReport rep;
  const double ideal_gap = kTwoPi / static_cast<double>(swarm.n);

  struct Streak {
    std::optional<double> start;
    std::optional<double> first_sustained;
    bool sustained_now = false;
    void feed(bool ok, double t, double window) {
      if (!ok) {
        start.reset();
        sustained_now = false;
        return;
      }
      if (!start) start = t;
      sustained_now = t - *start >= window - 1e-9;
      if (sustained_now && !first_sustained) first_sustained = start;
    }
  } surround, equal;

  std::vector<double> times, rho_err, e_norm;
  for (const auto& rec : trace) {
    double rerr = 0.0, perr = 0.0, emax = 0.0;
    std::vector<double> thetas;
    for (const auto& v : rec.vessels) {
      rerr = std::max(rerr, std::abs(v.rho - swarm.rho_o));
      emax = std::max(emax, v.pert.e.norm());
      thetas.push_back(v.theta);
      if (v.infeasible) ++rep.infeasible_events;
    }
    for (double g : adjacent_gaps(thetas)) perr = std::max(perr, std::abs(g - ideal_gap));
    const bool s_ok = rec.hull_distance < th.hull;
    const bool e_ok = s_ok && rerr <= th.rho && perr <= th.phase;
    surround.feed(s_ok, rec.t, th.window);
    equal.feed(e_ok, rec.t, th.window);
    times.push_back(rec.t);
    rho_err.push_back(rerr);
    e_norm.push_back(emax);
    rep.final_rho_error = rerr;
    rep.final_phase_error = perr;
  }
  rep.surrounded_at = surround.first_sustained;
  rep.equally_surrounded_at = equal.first_sustained;
  rep.surrounded_at_end = surround.sustained_now;
  rep.equally_surrounded_at_end = equal.sustained_now;
  rep.final_hull_distance = trace.back().hull_distance;
  rep.rho_error_rate = regulation::fit_decay_rate(times, rho_err, nullptr);
  rep.perturbation_rate = regulation::fit_decay_rate(times, e_norm, nullptr);
  return rep;
}

namespace {

struct Points {
  std::vector<Vec2> v;
};
Points operator+(const Points& a, const Points& b) {
  Points out{a.v};
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
  return out;
}
Points operator*(const Points& a, double s) {
  Points out{a.v};
  for (auto& p : out.v) p *= s;
  return out;
}

}  // namespace

std::vector<TraceRecord> ideal_mode_run(const Scenario& sc) {
  sc.validate();
  const bool a1 = sc.approach != Approach::A2;
  const bool decentralized = sc.approach == Approach::A1Decentralized;
  const auto init = sc.initial_states();
  const std::size_t n = init.size();
  const auto& swarm = sc.swarm;
  const std::size_t nsub = sc.substeps();
  const auto ticks = static_cast<long>(std::llround(sc.duration / sc.dt_ctrl));

  // Approach 1: [positions, estimates]; Approach 2: (rho, theta) per vessel.
  Points z;
  std::vector<std::optional<double>> theta_prev(n);
  if (a1) {
    for (const auto& s : init) z.v.push_back(s.position);
    for (const auto& s : init) z.v.push_back(s.position);
  } else {
    const Vec2 xo = sc.target.position(0.0);
    for (const auto& s : init) {
      const Vec2 d = s.position - xo;
      z.v.emplace_back(d.norm(), std::atan2(d.y(), d.x()));
    }
  }

  auto a1_velocity = [&](double t, const Points& y, std::size_t i) {
    const std::span<const Vec2> pos(y.v.data(), n);
    const Vec2 xo = sc.target.position(t);
    return protocols::surrounding_control(pos, i, decentralized ? y.v[n + i] : xo, swarm);
  };
  auto a2_rates = [&](const Points& y, std::size_t i) {
    std::vector<double> th(n);
    for (std::size_t j = 0; j < n; ++j) th[j] = y.v[j].y();
    const auto pc = protocols::equal_surround_control({y.v[i].x(), y.v[i].y()}, i, th, swarm);
    return pc ? Vec2(pc->eta_r, pc->omega_r) : Vec2::Zero();
  };
  auto rhs = [&](double t, const Points& y) {
    Points d{std::vector<Vec2>(y.v.size(), Vec2::Zero())};
    if (a1) {
      for (std::size_t i = 0; i < n; ++i) d.v[i] = a1_velocity(t, y, i);
      if (decentralized) {
        const std::span<const Vec2> est(y.v.data() + n, n);
        const auto dy = protocols::estimator_rate(est, sc.target.position(t), swarm);
        for (std::size_t i = 0; i < n; ++i) d.v[n + i] = dy[i];
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) d.v[i] = a2_rates(y, i);
    }
    return d;
  };

  std::vector<TraceRecord> trace;
  trace.reserve(static_cast<std::size_t>(ticks) + 1);
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * sc.dt_ctrl;
    TraceRecord rec;
    rec.t = t;
    rec.target = sc.target.position(t);
    for (std::size_t i = 0; i < n; ++i) {
      VesselTrace vt;
      Vec2 vel;
      if (a1) {
        vt.state.position = z.v[i];
        vel = a1_velocity(t, z, i);
        const Vec2 d = z.v[i] - rec.target;
        vt.rho = d.norm();
        vt.theta = geometry::unwrap(theta_prev[i], std::atan2(d.y(), d.x()));
        theta_prev[i] = vt.theta;
        vt.estimate = decentralized ? z.v[n + i] : rec.target;
      } else {
        vt.rho = z.v[i].x();
        vt.theta = z.v[i].y();
        vt.state.position = rec.target + vt.rho * Vec2(std::cos(vt.theta), std::sin(vt.theta));
        const Vec2 r = a2_rates(z, i);
        vel = conversion::polar_to_cartesian_command(r.x(), r.y(), vt.rho, vt.theta) +
              (sc.target.position(t + sc.dt_phys) - rec.target) / sc.dt_phys;
        vt.estimate = rec.target;
      }
      vt.state.heading = std::atan2(vel.y(), vel.x());
      vt.state.surge = vel.norm();
      rec.vessels.push_back(vt);
    }
    fill_monitors(rec, swarm);
    trace.push_back(std::move(rec));
    if (k == ticks) break;
    for (std::size_t sub = 0; sub < nsub; ++sub) {
      const double ts = t + static_cast<double>(sub) * sc.dt_phys;
      z = rk4_step_t(z, ts, sc.dt_phys, rhs);
      for (const auto& p : z.v) {
        if (!p.allFinite()) throw dynamics::NumericalBlowup(ts, 0);
      }
    }
  }
  return trace;
}

}  // namespace usv::engine
