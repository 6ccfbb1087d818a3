// One line per acceptance criterion; exit status is nonzero if any fails.
#include <chrono>
#include <cstdio>
#include <string>

#include "usv/cli/trace_csv.hpp"
#include "usv/cli/verify.hpp"
#include "usv/engine.hpp"
#include "usv/presets.hpp"

using namespace usv;

namespace {

// pinned tolerances
constexpr double kBaselineDeadline = 200.0;  // s simulated
constexpr double kBaselineWall = 10.0;       // s wall clock per run
constexpr int kBaselineSeeds = 10;
constexpr double kSpeedOvershoot = 0.05;
constexpr double kSpeedSettling = 15.0;
constexpr double kHeadingOvershoot = 0.03;
constexpr double kHeadingSettling = 20.0;
constexpr double kGradientRel = 1e-5;
constexpr double kDescentRel = 1e-6;
constexpr double kCentroidRel = 0.01;
constexpr double kRTildeRel = 1e-4;
constexpr double kSurgeRateRel = 0.02;
constexpr double kEstimatorRel = 0.05;
constexpr double kHullAbs = 1e-3;
constexpr int kSurroundSeeds = 20;

int failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("criterion %2d %s  %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void baseline_surround() {
  auto sc = *engine::preset("surround-sec6");
  bool ok = true;
  double worst_t = 0.0, worst_wall = 0.0;
  int reached = 0;
  for (int seed = 1; seed <= kBaselineSeeds; ++seed) {
    sc.seed = static_cast<std::uint64_t>(seed);
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = engine::run(sc);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    worst_wall = std::max(worst_wall, wall);
    const auto& at = res.outcome.equally_surrounded_at;
    if (at && *at <= kBaselineDeadline) {
      ++reached;
      worst_t = std::max(worst_t, *at);
    } else {
      ok = false;
    }
    ok = ok && wall <= kBaselineWall;
  }
  report(1, ok,
         fmt("equal surrounding (rho 10+-0.2 m, gaps 120+-5 deg, 5 s) on %d/%d seeds, latest at %.1f s "
             "(limit %.0f s); slowest run %.3f s wall (limit %.0f s)",
             reached, kBaselineSeeds, worst_t, kBaselineDeadline, worst_wall, kBaselineWall));
}

std::string settling(double at, double horizon) {
  return at >= horizon ? fmt("not settled within %.0f s", horizon) : fmt("settling %.1f s", at);
}

void pid_steps() {
  constexpr double horizon = 400.0;
  const auto st = cli::pid_step_response(horizon);
  const bool ok = st.speed_overshoot <= kSpeedOvershoot && st.speed_settling <= kSpeedSettling &&
                  st.heading_overshoot <= kHeadingOvershoot && st.heading_settling <= kHeadingSettling;
  report(2, ok,
         fmt("speed overshoot %.1f%% (limit %.0f%%), %s (limit %.0f s); heading overshoot %.1f%% "
             "(limit %.0f%%), %s (limit %.0f s)",
             100 * st.speed_overshoot, 100 * kSpeedOvershoot, settling(st.speed_settling, horizon).c_str(),
             kSpeedSettling, 100 * st.heading_overshoot, 100 * kHeadingOvershoot,
             settling(st.heading_settling, horizon).c_str(), kHeadingSettling));
}

void gradient() {
  const double e = cli::gradient_max_relative_error(100, 12);
  report(3, e <= kGradientRel,
         fmt("max relative error %.2e over 100 configurations (limit %.0e)", e, kGradientRel));
}

void descent() {
  const double v = cli::lyapunov_max_relative_rise(cli::Monitor::V, 20, 13);
  const double p = cli::lyapunov_max_relative_rise(cli::Monitor::P, 20, 13);
  report(4, v <= kDescentRel && p <= kDescentRel,
         fmt("largest per-tick rise / max value: V %.2e, P %.2e over 20 runs each (limit %.0e)", v, p,
             kDescentRel));
}

void centroid() {
  const double e = cli::centroid_max_relative_error(5, 14);
  report(5, e <= kCentroidRel, fmt("max relative deviation %.2e over 5/gamma2 (limit %.0e)", e, kCentroidRel));
}

void decay() {
  const auto d = cli::regulation_decay();
  report(6, d.r_tilde_max_relative_error <= kRTildeRel && d.surge_rate_error <= kSurgeRateRel,
         fmt("r~ vs r~(0)exp(-kappa4 t): %.2e relative over 10 s (limit %.0e); surge pair rate %.6f vs "
             "%.6f, error %.2e (limit %.0e)",
             d.r_tilde_max_relative_error, kRTildeRel, d.surge_rate, d.surge_rate_expected,
             d.surge_rate_error, kSurgeRateRel));
}

void estimator() {
  const auto e = cli::estimator_convergence();
  report(7, e.relative_error <= kEstimatorRel && e.rejects_disconnected && e.rejects_no_leader,
         fmt("rate %.5f vs gamma3*lambda_min %.5f, error %.2e (limit %.0e); rejects disconnected %s, "
             "empty leader set %s",
             e.measured_rate, e.expected_rate, e.relative_error, kEstimatorRel,
             e.rejects_disconnected ? "yes" : "no", e.rejects_no_leader ? "yes" : "no"));
}

void geometry_oracle() {
  const auto g = cli::geometry_equivalence(200, 11);
  report(8, g.max_exterior_error <= kHullAbs && g.containment_mismatches == 0,
         fmt("200 instances (%d inside, %d outside): max distance error %.2e (limit %.0e), containment "
             "mismatches %d",
             g.interior, g.exterior, g.max_exterior_error, kHullAbs, g.containment_mismatches));
}

void surrounding() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"approach1-centralized", "approach1-decentralized"}) {
    auto sc = *engine::preset(name);
    int held = 0;
    double latest = 0.0;
    for (int seed = 1; seed <= kSurroundSeeds; ++seed) {
      sc.seed = static_cast<std::uint64_t>(seed);
      const auto res = engine::run(sc);
      if (res.outcome.surrounded_at && res.outcome.surrounded_at_end) {
        ++held;
        latest = std::max(latest, *res.outcome.surrounded_at);
      }
    }
    ok = ok && held == kSurroundSeeds;
    detail += fmt("%s %d/%d seeds (latest %.1f s); ", name, held, kSurroundSeeds, latest);
  }
  report(9, ok, detail + "hull distance < 0.1 m sustained 5 s");
}

void determinism() {
  bool ok = true;
  for (const auto& name : engine::preset_names()) {
    const auto sc = *engine::preset(name);
    ok = ok && cli::trace_to_csv(engine::run(sc).trace) == cli::trace_to_csv(engine::run(sc).trace);
  }
  report(10, ok, fmt("%zu presets run twice with the same seed give %s CSV traces",
                     engine::preset_names().size(), ok ? "byte-identical" : "differing"));
}

}  // namespace

int main() {
  baseline_surround();
  pid_steps();
  gradient();
  descent();
  centroid();
  decay();
  estimator();
  geometry_oracle();
  surrounding();
  determinism();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
