#include <cmath>

#include <gtest/gtest.h>

#include "usv/cli/trace_csv.hpp"
#include "usv/engine.hpp"
#include "usv/geometry.hpp"
#include "usv/oracles.hpp"
#include "usv/presets.hpp"

using namespace usv;
using namespace usv::engine;

namespace {

Scenario must(const std::string& name) {
  auto p = preset(name);
  if (!p) throw std::runtime_error("missing preset " + name);
  return *p;
}

std::vector<Vec2> positions(const TraceRecord& r) {
  std::vector<Vec2> out;
  for (const auto& v : r.vessels) out.push_back(v.state.position);
  return out;
}

}  // namespace

TEST(Presets, AllValidate) {
  ASSERT_EQ(preset_names().size(), 5u);
  for (const auto& n : preset_names()) {
    const auto p = preset(n);
    ASSERT_TRUE(p) << n;
    EXPECT_NO_THROW(p->validate()) << n;
    EXPECT_FALSE(preset_description(n).empty());
  }
  EXPECT_FALSE(preset("nope"));
}

TEST(Scenario, ValidationErrors) {
  Scenario sc = must("surround-sec6");
  sc.duration = 0.0;
  EXPECT_THROW(sc.validate(), std::invalid_argument);
  sc = must("surround-sec6");
  sc.dt_ctrl = 0.205;
  EXPECT_THROW(sc.validate(), std::invalid_argument);
  sc = must("surround-sec6");
  sc.random_count = 2;
  sc.swarm.n = 2;
  EXPECT_THROW(sc.validate(), std::invalid_argument);
  sc = must("approach1-decentralized");
  sc.swarm.leader_set.clear();
  EXPECT_THROW(sc.validate(), std::invalid_argument);
}

TEST(Scenario, RandomPlacement) {
  Scenario sc = must("surround-sec6");
  const auto a = sc.initial_states();
  const auto b = sc.initial_states();
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].position, b[i].position);
    EXPECT_GE(a[i].position.x(), -20.0);
    EXPECT_LE(a[i].position.x(), 20.0);
    EXPECT_GE(a[i].position.y(), -20.0);
    EXPECT_LE(a[i].position.y(), 20.0);
    EXPECT_GE(a[i].heading, -kPi);
    EXPECT_LT(a[i].heading, kPi);
    EXPECT_EQ(a[i].surge, 0.0);
  }
  sc.seed = 2;
  EXPECT_NE(sc.initial_states()[0].position, a[0].position);
}

TEST(Target, Trajectories) {
  TargetTrajectory t;
  t.start = Vec2(1, 2);
  EXPECT_EQ(t.position(50.0), Vec2(1, 2));
  t.kind = TargetTrajectory::Kind::ConstantVelocity;
  t.velocity = Vec2(0.1, -0.2);
  EXPECT_LT((t.position(10.0) - Vec2(2, 0)).norm(), 1e-15);
  t.kind = TargetTrajectory::Kind::Waypoints;
  t.waypoints = {{Vec2(0, 0), 0.0}, {Vec2(10, 0), 2.0}, {Vec2(10, 5), 1.0}};
  EXPECT_LT((t.position(2.5) - Vec2(5, 0)).norm(), 1e-12);
  EXPECT_LT((t.position(7.0) - Vec2(10, 2)).norm(), 1e-12);
  EXPECT_LT((t.position(100.0) - Vec2(10, 5)).norm(), 1e-12);
}

TEST(Run, EquilibriumIsFixedPoint) {
  const auto res = run(must("equilibrium"));
  for (const auto& r : res.trace) {
    EXPECT_EQ(r.P, 0.0);
    EXPECT_EQ(r.hull_distance, 0.0);
    for (const auto& v : r.vessels) EXPECT_NEAR(v.rho, 10.0, 1e-9);
  }
  ASSERT_TRUE(res.outcome.surrounded_at);
  ASSERT_TRUE(res.outcome.equally_surrounded_at);
  EXPECT_EQ(*res.outcome.surrounded_at, 0.0);
  EXPECT_EQ(*res.outcome.equally_surrounded_at, 0.0);
}

TEST(Run, TimeBaseAndMonitors) {
  const Scenario sc = must("surround-sec6");
  const auto res = run(sc);
  ASSERT_EQ(res.trace.size(), 1001u);
  for (std::size_t k = 0; k < res.trace.size(); ++k) {
    EXPECT_NEAR(res.trace[k].t, k * sc.dt_ctrl, 1e-9);
    if (k > 0) {
      EXPECT_GT(res.trace[k].t, res.trace[k - 1].t);
    }
    EXPECT_TRUE(std::isfinite(res.trace[k].V) && std::isfinite(res.trace[k].P) &&
                std::isfinite(res.trace[k].hull_distance));
    for (const auto& v : res.trace[k].vessels) {
      EXPECT_TRUE(sc.params.tau1_range.contains(v.command.tau1));
      EXPECT_TRUE(sc.params.tau2_range.contains(v.command.tau2));
    }
  }
}

TEST(Run, HullMonitorMatchesOracle) {
  for (const auto& name : {"surround-sec6", "approach1-centralized"}) {
    const auto res = run(must(name));
    for (std::size_t k = 0; k < res.trace.size(); k += 5) {
      const auto& r = res.trace[k];
      const auto x = positions(r);
      const bool inside = oracles::simplex_contains(r.target, x);
      ASSERT_EQ(r.hull_distance == 0.0, inside) << name << " t=" << r.t;
    }
  }
}

TEST(Run, ThreeVesselSurroundBaseline) {
  const auto res = run(must("surround-sec6"));
  ASSERT_TRUE(res.outcome.equally_surrounded_at);
  EXPECT_LE(*res.outcome.equally_surrounded_at, 200.0);
  EXPECT_TRUE(res.outcome.equally_surrounded_at_end);
  ASSERT_TRUE(res.outcome.surrounded_at);
  EXPECT_LE(*res.outcome.surrounded_at, *res.outcome.equally_surrounded_at);
  EXPECT_GT(res.outcome.perturbation_rate, 0.0);
  EXPECT_GT(res.outcome.rho_error_rate, 0.0);
}

TEST(Run, SteadyChordLength) {
  Scenario sc = must("surround-sec6");
  sc.duration = 3000.0;
  const auto res = run(sc);
  const double chord = 2.0 * sc.swarm.rho_o * std::sin(kPi / 3);
  double worst = 0.0;
  for (const auto& r : res.trace) {
    if (r.t < sc.duration - 100.0) continue;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j)
        worst = std::max(worst, std::abs((r.vessels[i].state.position - r.vessels[j].state.position).norm() - chord));
  }
  EXPECT_LE(worst, 1e-2);
}

TEST(Run, AgreesWithIdealModeAtSteadyState) {
  Scenario sc = must("surround-sec6");
  sc.duration = 400.0;
  const auto full = run(sc).trace.back();
  const auto ideal = ideal_mode_run(sc).back();
  std::vector<double> tf, ti;
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(full.vessels[i].rho, ideal.vessels[i].rho, 0.02 * ideal.vessels[i].rho);
    tf.push_back(full.vessels[i].theta);
    ti.push_back(ideal.vessels[i].theta);
  }
  const auto gf = adjacent_gaps(tf), gi = adjacent_gaps(ti);
  for (std::size_t k = 0; k < gf.size(); ++k) EXPECT_NEAR(gf[k], gi[k], 0.02 * gi[k]);
}

TEST(Run, PerturbationDecaysOnAllPresets) {
  for (const auto& name : preset_names()) {
    if (name == "equilibrium") continue;
    const auto res = run(must(name));
    EXPECT_GT(res.outcome.perturbation_rate, 0.0) << name;
    if (res.outcome.equally_surrounded_at) {
      EXPECT_TRUE(res.outcome.surrounded_at) << name;
    }
  }
}

TEST(Run, Deterministic) {
  for (const auto& name : preset_names()) {
    const auto sc = must(name);
    EXPECT_EQ(cli::trace_to_csv(run(sc).trace), cli::trace_to_csv(run(sc).trace)) << name;
  }
}

TEST(Run, BlowupReported) {
  Scenario sc = must("surround-sec6");
  sc.params.k1 = 40.0;
  try {
    run(sc);
    FAIL() << "expected NumericalBlowup";
  } catch (const dynamics::NumericalBlowup& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LT(e.time(), sc.duration);
    EXPECT_LT(e.vessel(), 3u);
  }
}

TEST(Run, DecentralizedEstimatesConverge) {
  const auto res = run(must("approach1-decentralized"));
  for (const auto& v : res.trace.back().vessels)
    EXPECT_LT((v.estimate - res.trace.back().target).norm(), 1e-6);
}

TEST(Outcomes, NeverSurrounded) {
  std::vector<TraceRecord> tr(100);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    tr[k].t = 0.2 * k;
    tr[k].hull_distance = 1.0;
    tr[k].vessels.resize(3);
  }
  const auto o = detect_outcomes(tr, protocols::SwarmConfig{}, Thresholds{});
  EXPECT_FALSE(o.surrounded_at);
  EXPECT_FALSE(o.equally_surrounded_at);
}

TEST(Outcomes, SustainedWindowRequired) {
  protocols::SwarmConfig cfg;
  std::vector<TraceRecord> tr(200);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    tr[k].t = 0.2 * k;
    // inside for 4 s starting at t = 2, then for good from t = 20
    const bool in = (tr[k].t >= 2.0 && tr[k].t < 6.0) || tr[k].t >= 20.0;
    tr[k].hull_distance = in ? 0.0 : 0.5;
    tr[k].vessels.resize(3);
    for (std::size_t i = 0; i < 3; ++i) {
      tr[k].vessels[i].rho = 10.0 + (in ? 0.0 : 1.0);
      tr[k].vessels[i].theta = kTwoPi * i / 3.0;
    }
  }
  const auto o = detect_outcomes(tr, cfg, Thresholds{});
  ASSERT_TRUE(o.surrounded_at);
  EXPECT_NEAR(*o.surrounded_at, 20.0, 1e-9);
  ASSERT_TRUE(o.equally_surrounded_at);
  EXPECT_NEAR(*o.equally_surrounded_at, 20.0, 1e-9);
}

TEST(AdjacentGaps, SumToFullTurn) {
  const auto g = adjacent_gaps({0.1, 7.0, -2.0, 3.3});
  double s = 0.0;
  for (double x : g) {
    EXPECT_GE(x, 0.0);
    s += x;
  }
  EXPECT_NEAR(s, kTwoPi, 1e-12);
}
