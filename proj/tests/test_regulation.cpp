#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "usv/cli/verify.hpp"
#include "usv/engine.hpp"
#include "usv/regulation.hpp"

using namespace usv;
using namespace usv::regulation;
using dynamics::DynamicsParams;
using dynamics::VesselState;

namespace {

ReferenceSignal constant_ref(double w_r, double psi_r) {
  ReferenceSignal r;
  r.w_r = w_r;
  r.psi_r = psi_r;
  return r;
}

}  // namespace

TEST(RegGains, DefaultValues) {
  const auto g = RegGains::defaults();
  EXPECT_EQ(g.kappa1(), 0.02);
  EXPECT_EQ(g.kappa2(), 0.001);
  EXPECT_EQ(g.kappa3(), 0.076);
  EXPECT_EQ(g.kappa4(), 0.418);
}

TEST(RegGains, RejectsOverdampedSurgePairAndNonPositive) {
  EXPECT_THROW(RegGains(0.01, 0.3, 0.1, 0.1), std::invalid_argument);
  EXPECT_THROW(RegGains(0.0225, 0.3, 0.1, 0.1), std::invalid_argument);
  EXPECT_NO_THROW(RegGains(0.0226, 0.3, 0.1, 0.1));
  EXPECT_THROW(RegGains(0.02, 0.001, 0.0, 0.4), std::invalid_argument);
  EXPECT_THROW(RegGains(0.02, 0.001, 0.07, -0.4), std::invalid_argument);
}

TEST(BacksteppingTau1, FeedforwardHoldsSpeed) {
  const auto p = DynamicsParams::identified();
  VesselState s;
  s.surge = 1.7;
  const auto ref = constant_ref(1.7, 0.0);
  EXPECT_NEAR(backstepping_tau1_law(s, ref, 0.0, RegGains::defaults(), p), -p.k1 * 1.7 / p.k3, 1e-12);
}

TEST(BacksteppingTau1, ZeroAtRest) {
  EXPECT_EQ(backstepping_tau1_law({}, {}, 0.0, RegGains::defaults(), DynamicsParams::identified()), 0.0);
}

TEST(BacksteppingTau1, Substitution) {
  VesselState s;
  s.surge = 2.0;
  s.sway = 0.1;
  s.yaw_rate = 0.2;
  const auto ref = constant_ref(1.5, 0.0);
  const double tau = backstepping_tau1_law(s, ref, 0.0, RegGains::defaults(), DynamicsParams::identified());
  EXPECT_NEAR(tau, (0.098 * 2 - 0.003 * 0.02 - 0.0005) / 0.005, 1e-10);
  EXPECT_NEAR(tau, 39.088, 1e-10);
}

TEST(BacksteppingTau2, ZeroAtEquilibrium) {
  EXPECT_EQ(backstepping_tau2({}, {}, RegGains::defaults(), DynamicsParams::identified()), 0.0);
}

TEST(BacksteppingTau2, Substitution) {
  VesselState s;
  s.heading = 0.1;
  const auto g = RegGains::defaults();
  const double k3 = g.kappa3(), k4 = g.kappa4();
  const double tau = backstepping_tau2(s, {}, g, DynamicsParams::identified());
  EXPECT_NEAR(tau, (-k3 * k3 * 0.1 + (k3 + k4) * k3 * 0.1) / -0.019, 1e-12);
  EXPECT_NEAR(tau, (-0.0005776 + 0.0037544) / -0.019, 1e-12);
  EXPECT_NEAR(tau, -0.1672, 1e-6);
}

TEST(BacksteppingTau2, ErrorCoordinatesDefinition) {
  VesselState s;
  s.heading = 1.0;
  s.yaw_rate = 0.05;
  ReferenceSignal r = constant_ref(1.2, 0.8);
  r.dpsi_r = 0.02;
  r.varpi = 1.5;
  r.dvarpi = 0.1;
  const auto g = RegGains::defaults();
  const auto e = error_coordinates(s, r, 0.3, g);
  EXPECT_NEAR(e.psi_tilde, 0.2, 1e-15);
  EXPECT_NEAR(e.phi, 0.3, 1e-15);
  EXPECT_NEAR(e.r_tilde, 0.05 * 1.5 - 0.02 * 1.5 + 0.2 * 0.1 + g.kappa3() * 0.3, 1e-15);
  EXPECT_NEAR(e.w_tilde, -1.2, 1e-15);
  EXPECT_NEAR(e.eta_tilde, 0.3, 1e-15);
}

TEST(PidTau1, ZeroHistory) {
  const auto [tau, rs] = pid_tau1({}, {}, {}, RegGains::defaults(), DynamicsParams::identified(), 0.01);
  EXPECT_EQ(tau, 0.0);
  EXPECT_EQ(rs.integral_w_error, 0.0);
}

TEST(PidTau1, LinearAccumulation) {
  const auto g = RegGains::defaults();
  const auto p = engine::vessel_model();
  VesselState s;
  const auto ref = constant_ref(-1.0, 0.0);  // w~ = 1 with no feedforward
  RegulatorState rs;
  double tau = 0.0;
  const double dt = 0.01, T = 10.0;
  for (int k = 0; k <= 1000; ++k) std::tie(tau, rs) = pid_tau1(s, ref, rs, g, p, dt);
  EXPECT_NEAR(rs.integral_w_error, T, 1e-9);
  EXPECT_NEAR(tau, -g.kappa1() * T / p.k3 - g.kappa2() / p.k3, 1e-7);
}

TEST(PidTau1, IntegratorFrozenWhenPushingFurtherOut) {
  const auto g = RegGains::defaults();
  auto p = engine::vessel_model();
  p.tau1_range = {-10.0, 10.0};
  const auto ref = constant_ref(-1.0, 0.0);
  RegulatorState rs;
  double tau = 0.0;
  for (int k = 0; k < 100000; ++k) std::tie(tau, rs) = pid_tau1({}, ref, rs, g, p, 0.01);
  // the unsaturated output parks within one update of the lower limit
  const double one_update = g.kappa1() * 0.01 / p.k3;
  EXPECT_GE(tau, -10.0 - 1e-9);
  EXPECT_LE(tau, -10.0 + one_update);
  EXPECT_LT(rs.integral_w_error, 10.0 * p.k3 / g.kappa1());
}

TEST(PidTau2, Examples) {
  const auto g = RegGains::defaults();
  const auto p = DynamicsParams::identified();
  EXPECT_EQ(pid_tau2({}, {}, g, p), 0.0);
  VesselState s;
  s.yaw_rate = 0.1;
  EXPECT_NEAR(pid_tau2(s, {}, g, p), -(-0.1055 + 0.076 + 0.418) / 0.019 * 0.1, 1e-12);
}

TEST(PidLaws, EqualBacksteppingUnderConstantReferences) {
  const auto g = RegGains::defaults();
  const auto p = engine::vessel_model();
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double varpi : {1.0, 2.5}) {
    RegulatorState bs, pi;
    ReferenceSignal ref = constant_ref(1.5, 0.4);
    ref.varpi = varpi;
    for (int k = 0; k < 200; ++k) {
      VesselState s;
      s.surge = 1.5 + u(gen);
      s.heading = 0.4 + u(gen);
      s.sway = 0.2 * u(gen);
      s.yaw_rate = 0.1 * u(gen);
      ref.v_r = s.sway;
      double t_bs, t_pi;
      std::tie(t_bs, bs) = backstepping_tau1(s, ref, bs, g, p, 0.01);
      std::tie(t_pi, pi) = pid_tau1(s, ref, pi, g, p, 0.01);
      ASSERT_NEAR(t_bs, t_pi, 1e-9 * std::max(1.0, std::abs(t_pi)));
      ASSERT_NEAR(backstepping_tau2(s, ref, g, p), pid_tau2(s, ref, g, p), 1e-9);
    }
  }
}

TEST(BacksteppingTau1, EtaTracksReferenceAccelerationChanges) {
  const auto g = RegGains::defaults();
  const auto p = engine::vessel_model();
  VesselState s;
  s.surge = 1.0;
  ReferenceSignal ref = constant_ref(1.0, 0.0);
  RegulatorState rs;
  std::tie(std::ignore, rs) = backstepping_tau1(s, ref, rs, g, p, 0.01);
  ref.dw_r = 0.3;  // jump in the reference acceleration with zero speed error
  std::tie(std::ignore, rs) = backstepping_tau1(s, ref, rs, g, p, 0.01);
  EXPECT_NEAR(rs.eta, 0.3, 1e-15);
}

TEST(ClosedLoop, ExactErrorDecay) {
  const auto d = cli::regulation_decay();
  EXPECT_LE(d.r_tilde_max_relative_error, 1e-6);
  EXPECT_LE(d.r_tilde_rate_error, 0.02);
  EXPECT_LE(d.phi_residual, 1e-6);
  EXPECT_NEAR(d.surge_rate_expected, 0.0005, 1e-15);
  EXPECT_LE(d.surge_rate_error, 0.02);
}

TEST(ClosedLoop, SurgePairConvergesForRandomGains) {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> u(0, 1);
  const auto p = engine::vessel_model();
  for (int trial = 0; trial < 100; ++trial) {
    const double k2 = 0.05 + 0.3 * u(gen);
    const double k1 = k2 * k2 / 4 * (1.05 + 3 * u(gen));
    const RegGains g(k1, k2, 0.05 + 0.2 * u(gen), 0.1 + 0.5 * u(gen));
    VesselState s0;
    s0.surge = 3.0 * u(gen);
    s0.heading = u(gen) - 0.5;
    const double eta0 = u(gen) - 0.5;
    auto ref = [](double, double v) {
      ReferenceSignal r;
      r.w_r = 1.0;
      r.v_r = v;
      r.varpi = std::sqrt(2.0);
      return r;
    };
    const auto run = simulate_closed_loop(s0, eta0, ref, g, p, 400.0, 0.05);
    auto energy = [&](const ErrorCoordinates& e) { return std::hypot(std::sqrt(k1) * e.w_tilde, e.eta_tilde); };
    const double e0 = energy(run.front().e), e1 = energy(run.back().e);
    ASSERT_LT(e1, 1e-2 * e0 + 1e-12) << "trial " << trial;
  }
}

TEST(Monitor, ExactExponential) {
  const auto g = RegGains::defaults();
  std::vector<ErrorSample> tr;
  for (int k = 0; k < 100; ++k) {
    ErrorSample s;
    s.t = 0.1 * k;
    s.e.r_tilde = std::exp(-0.418 * s.t);
    s.e.phi = std::exp(-0.076 * s.t);
    tr.push_back(s);
  }
  const auto rep = error_subsystem_monitor(tr, g);
  EXPECT_NEAR(rep.r_tilde.fitted_rate, 0.418, 0.418 * 0.02);
  EXPECT_NEAR(rep.r_tilde.analytic_rate, 0.418, 1e-15);
  EXPECT_NEAR(rep.phi.fitted_rate, 0.076, 1e-9);
  EXPECT_TRUE(rep.surge.exact_convergence);
}

TEST(Monitor, SurgePairRateFromRoots) {
  const auto rep = error_subsystem_monitor(std::vector<ErrorSample>(10), RegGains::defaults());
  // roots of s^2 + 0.001 s + 0.02 are complex with real part -0.0005
  EXPECT_NEAR(rep.surge.analytic_rate, 0.0005, 1e-15);
  const auto other = error_subsystem_monitor(std::vector<ErrorSample>(10), RegGains(0.3, 0.5, 0.1, 0.1));
  EXPECT_NEAR(other.surge.analytic_rate, 0.25, 1e-15);
}

TEST(Monitor, ZeroTraceIsExact) {
  const auto rep = error_subsystem_monitor(std::vector<ErrorSample>(20), RegGains::defaults());
  EXPECT_TRUE(rep.r_tilde.exact_convergence);
  EXPECT_TRUE(rep.phi.exact_convergence);
  EXPECT_TRUE(rep.surge.exact_convergence);
}

TEST(Monitor, ShortTraceRejected) {
  EXPECT_THROW(error_subsystem_monitor(std::vector<ErrorSample>(9), RegGains::defaults()), std::invalid_argument);
}

TEST(PidStep, SpeedReachesSteadyState) {
  const auto st = cli::pid_step_response(15000.0);
  EXPECT_LE(st.speed_tail_error, 0.01);
  EXPECT_LE(st.heading_tail_error, 0.01);
}

TEST(PidStep, HeadingSmallOvershoot) {
  const auto st = cli::pid_step_response(400.0);
  EXPECT_LE(st.heading_overshoot, 0.03);
  EXPECT_NEAR(st.heading_final, deg_to_rad(300.0), deg_to_rad(300.0) * 0.005);
}
