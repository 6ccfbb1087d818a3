#include "usv/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "usv/engine.hpp"
#include "usv/geometry.hpp"
#include "usv/oracles.hpp"
#include "usv/protocols.hpp"
#include "usv/regulation.hpp"

namespace usv::cli {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(g_() >> 11) * 0x1.0p-53);
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(g_() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::mt19937_64 g_;
};

}  // namespace

GeometryStats geometry_equivalence(int count, std::uint64_t seed) {
  Rng rng(seed);
  GeometryStats st;
  for (int k = 0; k < count; ++k) {
    const int n = rng.integer(1, 6);
    std::vector<Vec2> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) p = Vec2(rng.uniform(-10, 10), rng.uniform(-10, 10));
    const Vec2 xo(rng.uniform(-6, 6), rng.uniform(-6, 6));
    const double lib = geometry::hull_distance(xo, pts);
    const auto orc = oracles::simplex_distance(xo, pts);
    const bool lib_in = lib == 0.0;
    const bool orc_in = orc.distance <= 1e-9;
    if (lib_in != orc_in) ++st.containment_mismatches;
    if (lib_in) {
      ++st.interior;
    } else {
      ++st.exterior;
      st.max_exterior_error = std::max(st.max_exterior_error, std::abs(lib - orc.distance));
    }
  }
  return st;
}

double gradient_max_relative_error(int count, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < count;) {
    const int n = rng.integer(3, 6);
    protocols::SwarmConfig cfg;
    cfg.n = static_cast<std::size_t>(n);
    cfg.mu = rng.uniform(4, 12);
    cfg.gamma1 = rng.uniform(1e-4, 1e-2);
    cfg.gamma2 = rng.uniform(0.01, 0.5);
    std::vector<Vec2> x(cfg.n);
    for (auto& p : x) p = Vec2(rng.uniform(-8, 8), rng.uniform(-8, 8));
    const Vec2 xo(rng.uniform(-5, 5), rng.uniform(-5, 5));
    bool near_boundary = false;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = i + 1; j < x.size(); ++j)
        if (std::abs((x[i] - x[j]).norm() - cfg.mu) < 1e-3) near_boundary = true;
    if (near_boundary) continue;
    ++k;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Vec2 u = protocols::surrounding_control(x, i, xo, cfg);
      const Vec2 ref = -0.5 * oracles::fd_gradient_V(x, i, xo, cfg);
      const double scale = std::max(u.norm(), ref.norm());
      if (scale > 0.0) worst = std::max(worst, (u - ref).norm() / scale);
    }
  }
  return worst;
}

double lyapunov_max_relative_rise(Monitor m, int count, std::uint64_t seed) {
  Rng rng(seed);
  double worst = -INFINITY;
  for (int k = 0; k < count; ++k) {
    engine::Scenario sc;
    sc.random_count = static_cast<std::size_t>(rng.integer(3, 6));
    sc.swarm.n = sc.random_count;
    sc.seed = static_cast<std::uint64_t>(rng.integer(1, 1 << 30));
    sc.duration = 100.0;
    if (m == Monitor::V) {
      sc.approach = engine::Approach::A1Centralized;
      sc.swarm.mu = rng.uniform(5, 15);
      sc.swarm.gamma1 = rng.uniform(2e-4, 2e-3);
      sc.swarm.gamma2 = rng.uniform(0.01, 0.1);
    } else {
      sc.approach = engine::Approach::A2;
      sc.swarm.beta2 = rng.uniform(0.02, 0.1);
      sc.area = {Vec2(-8, -8), Vec2(8, 8)};
    }
    const auto trace = engine::ideal_mode_run(sc);
    double top = 0.0, rise = -INFINITY;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const double v = m == Monitor::V ? trace[i].V : trace[i].P;
      top = std::max(top, v);
      if (i > 0) rise = std::max(rise, v - (m == Monitor::V ? trace[i - 1].V : trace[i - 1].P));
    }
    worst = std::max(worst, top > 0.0 ? rise / top : rise);
  }
  return worst;
}

double centroid_max_relative_error(int count, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    engine::Scenario sc;
    sc.approach = engine::Approach::A1Centralized;
    sc.random_count = static_cast<std::size_t>(rng.integer(3, 6));
    sc.swarm.n = sc.random_count;
    sc.seed = static_cast<std::uint64_t>(rng.integer(1, 1 << 30));
    sc.target.start = Vec2(rng.uniform(-30, 30), rng.uniform(-30, 30));
    const double horizon = 5.0 / sc.swarm.gamma2;
    sc.duration = std::ceil(horizon / sc.dt_ctrl) * sc.dt_ctrl;
    const auto trace = engine::ideal_mode_run(sc);
    auto centroid_gap = [&](const engine::TraceRecord& r) {
      Vec2 c = Vec2::Zero();
      for (const auto& v : r.vessels) c += v.state.position;
      return (c / static_cast<double>(r.vessels.size()) - r.target).norm();
    };
    const double d0 = centroid_gap(trace.front());
    for (const auto& r : trace) {
      if (r.t > horizon) break;
      const double expect = d0 * std::exp(-sc.swarm.gamma2 * r.t);
      worst = std::max(worst, std::abs(centroid_gap(r) - expect) / expect);
    }
  }
  return worst;
}

namespace {

// Smooth reference with closed-form derivatives for the regulation checks.
conversion::ReferenceSignal analytic_reference(double t, double v) {
  conversion::ReferenceSignal r;
  r.w_r = 1.5 + 0.3 * std::sin(0.2 * t);
  r.dw_r = 0.06 * std::cos(0.2 * t);
  r.ddw_r = -0.012 * std::sin(0.2 * t);
  r.psi_r = 0.5 * std::sin(0.1 * t) + 0.05 * t;
  r.dpsi_r = 0.05 * std::cos(0.1 * t) + 0.05;
  r.ddpsi_r = -0.005 * std::sin(0.1 * t);
  r.v_r = v;
  const auto vp = conversion::varpi_from(r.w_r, r.dw_r, r.ddw_r);
  r.varpi = vp.value;
  r.dvarpi = vp.d1;
  r.ddvarpi = vp.d2;
  return r;
}

}  // namespace

DecayStats regulation_decay() {
  const auto g = regulation::RegGains::defaults();
  const auto p = engine::vessel_model();
  DecayStats st;

  dynamics::VesselState s0;
  const auto ref0 = analytic_reference(0.0, 0.0);
  s0.surge = ref0.w_r + 0.5;
  s0.heading = ref0.psi_r + 0.3;
  s0.yaw_rate = 0.1;
  const double eta0 = ref0.dw_r + 0.01;

  const double dt = 0.01;
  const auto short_run = regulation::simulate_closed_loop(s0, eta0, analytic_reference, g, p, 10.0, dt);
  const double r0 = short_run.front().e.r_tilde;
  std::vector<regulation::ErrorSample> samples;
  for (const auto& c : short_run) {
    const double expect = r0 * std::exp(-g.kappa4() * c.t);
    st.r_tilde_max_relative_error =
        std::max(st.r_tilde_max_relative_error, std::abs(c.e.r_tilde - expect) / std::abs(expect));
    samples.push_back({c.t, c.e});
  }
  for (std::size_t k = 1; k + 1 < short_run.size(); ++k) {
    const double dphi = (short_run[k + 1].e.phi - short_run[k - 1].e.phi) / (2.0 * dt);
    st.phi_residual = std::max(st.phi_residual,
                               std::abs(dphi + g.kappa3() * short_run[k].e.phi - short_run[k].e.r_tilde));
  }
  const auto rep = regulation::error_subsystem_monitor(samples, g);
  st.r_tilde_rate_error = rep.r_tilde.relative_error();

  const auto long_run = regulation::simulate_closed_loop(s0, eta0, analytic_reference, g, p, 3000.0, dt);
  std::vector<regulation::ErrorSample> ls;
  for (std::size_t k = 0; k < long_run.size(); k += 10) ls.push_back({long_run[k].t, long_run[k].e});
  const auto lrep = regulation::error_subsystem_monitor(ls, g);
  st.surge_rate = lrep.surge.fitted_rate;
  st.surge_rate_expected = lrep.surge.analytic_rate;
  st.surge_rate_error = lrep.surge.relative_error();
  return st;
}

EstimatorStats estimator_convergence() {
  protocols::SwarmConfig cfg;
  cfg.n = 3;
  cfg.gamma3 = 1.0;
  cfg.comm_graph = protocols::Graph::line(3);
  cfg.leader_set = {0};
  EstimatorStats st;
  st.expected_rate = cfg.gamma3 * oracles::grounded_laplacian_lambda_min(cfg.comm_graph, cfg.leader_set);

  const Vec2 xo(5.0, -3.0);
  protocols::EstimatorState e{{Vec2(-10, 0), Vec2(0, 10), Vec2(10, 0)}};
  const double dt = 0.2;
  std::vector<double> t, err;
  for (int k = 0; k <= 300; ++k) {
    const double tk = k * dt;
    double m = 0.0;
    for (const auto& y : e.y) m = std::max(m, (y - xo).norm());
    if (tk >= 10.0 && tk <= 50.0) {
      t.push_back(tk);
      err.push_back(m);
    }
    e = protocols::estimator_step(e, xo, cfg, dt);
  }
  st.measured_rate = regulation::fit_decay_rate(t, err, nullptr);
  st.relative_error = std::abs(st.measured_rate - st.expected_rate) / st.expected_rate;

  auto rejects = [](const protocols::SwarmConfig& c) {
    try {
      c.validate(true);
    } catch (const std::invalid_argument&) {
      return true;
    }
    return false;
  };
  protocols::SwarmConfig split = cfg;
  split.comm_graph = protocols::Graph(3);
  split.comm_graph.add_edge(0, 1);
  st.rejects_disconnected = rejects(split);
  protocols::SwarmConfig blind = cfg;
  blind.leader_set.clear();
  st.rejects_no_leader = rejects(blind);
  return st;
}

StepStats pid_step_response(double duration) {
  const auto g = regulation::RegGains::defaults();
  const auto p = engine::vessel_model();
  const double dt = 0.01;
  const double w_goal = 2.0, psi_goal = deg_to_rad(300.0);
  conversion::ReferenceSignal ref;
  ref.w_r = w_goal;
  ref.psi_r = psi_goal;

  dynamics::VesselState s;
  regulation::RegulatorState rs;
  std::vector<double> t, w, psi;
  const auto steps = static_cast<long>(std::llround(duration / dt));
  for (long k = 0; k <= steps; ++k) {
    t.push_back(static_cast<double>(k) * dt);
    w.push_back(s.surge);
    psi.push_back(s.heading);
    ref.v_r = s.sway;
    auto [tau1, next] = regulation::pid_tau1(s, ref, rs, g, p, dt);
    rs = next;
    const double tau2 = regulation::pid_tau2(s, ref, g, p);
    const auto u = dynamics::saturate({tau1, tau2}, p);
    s = dynamics::step(s, u.command, p, dt, t.back());
  }
  auto analyse = [&](const std::vector<double>& y, double goal, double& overshoot, double& settling) {
    double peak = 0.0;
    for (double v : y) peak = std::max(peak, v);
    overshoot = std::max(0.0, (peak - goal) / goal);
    settling = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k)
      if (std::abs(y[k] - goal) > 0.005 * goal) settling = t[k];
  };
  StepStats st;
  analyse(w, w_goal, st.speed_overshoot, st.speed_settling);
  analyse(psi, psi_goal, st.heading_overshoot, st.heading_settling);
  st.speed_final = w.back();
  st.heading_final = psi.back();
  for (std::size_t k = t.size() * 9 / 10; k < t.size(); ++k) {
    st.speed_tail_error = std::max(st.speed_tail_error, std::abs(w[k] - w_goal) / w_goal);
    st.heading_tail_error = std::max(st.heading_tail_error, std::abs(psi[k] - psi_goal) / psi_goal);
  }
  return st;
}

std::vector<std::string> suite_names() {
  return {"geometry", "gradient", "lyapunov", "regulation", "estimator", "all"};
}

namespace {

Check at_most(const std::string& name, double measured, double tol) {
  return {name, measured, tol, measured <= tol};
}

void suite(const std::string& name, std::vector<Check>& out) {
  if (name == "geometry") {
    const auto g = geometry_equivalence();
    out.push_back(at_most("hull_distance_vs_simplex_oracle", g.max_exterior_error, 1e-3));
    out.push_back(at_most("containment_mismatches", g.containment_mismatches, 0));
  } else if (name == "gradient") {
    out.push_back(at_most("surrounding_control_vs_fd_gradient", gradient_max_relative_error(), 1e-5));
  } else if (name == "lyapunov") {
    out.push_back(at_most("V_max_relative_rise_per_tick", lyapunov_max_relative_rise(Monitor::V), 1e-6));
    out.push_back(at_most("P_max_relative_rise_per_tick", lyapunov_max_relative_rise(Monitor::P), 1e-6));
    out.push_back(at_most("centroid_law_relative_error", centroid_max_relative_error(), 0.01));
  } else if (name == "regulation") {
    const auto d = regulation_decay();
    out.push_back(at_most("r_tilde_exact_decay_relative_error", d.r_tilde_max_relative_error, 1e-4));
    out.push_back(at_most("r_tilde_rate_vs_kappa4", d.r_tilde_rate_error, 0.02));
    out.push_back(at_most("phi_residual", d.phi_residual, 1e-6));
    out.push_back(at_most("surge_pair_rate_vs_roots", d.surge_rate_error, 0.02));
  } else if (name == "estimator") {
    const auto e = estimator_convergence();
    out.push_back(at_most("estimator_rate_vs_grounded_laplacian", e.relative_error, 0.05));
    out.push_back(at_most("disconnected_graph_accepted", e.rejects_disconnected ? 0 : 1, 0));
    out.push_back(at_most("empty_leader_set_accepted", e.rejects_no_leader ? 0 : 1, 0));
  }
}

}  // namespace

std::optional<std::vector<Check>> run_suite(const std::string& name) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) return std::nullopt;
  std::vector<Check> out;
  if (name == "all") {
    for (const auto& n : names)
      if (n != "all") suite(n, out);
  } else {
    suite(name, out);
  }
  return out;
}

nlohmann::json report_json(const std::string& suite_name, const std::vector<Check>& checks) {
  nlohmann::json j;
  j["suite"] = suite_name;
  bool all = true;
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"measured", c.measured},
                           {"tolerance", c.tolerance},
                           {"verdict", c.pass ? "pass" : "fail"}});
    all = all && c.pass;
  }
  j["passed"] = all;
  return j;
}

}  // namespace usv::cli
