#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace usv::cli {

struct GeometryStats {
  double max_exterior_error = 0.0;  // |library - oracle| on exterior points, m
  int containment_mismatches = 0;
  int interior = 0;
  int exterior = 0;
};
GeometryStats geometry_equivalence(int count = 200, std::uint64_t seed = 11);

/// Worst relative gap between surrounding_control and -1/2 grad V over random
/// configurations kept clear of the ||x_ij|| = mu boundary.
double gradient_max_relative_error(int count = 100, std::uint64_t seed = 12);

enum class Monitor { V, P };
/// Largest per-tick rise of V (Approach 1) or P (Approach 2) in ideal-mode
/// runs, divided by that run's largest monitor value.
double lyapunov_max_relative_rise(Monitor m, int count = 20, std::uint64_t seed = 13);

/// Largest relative gap between the ideal-mode centroid distance and
/// d(0) e^{-gamma2 t} over 5 / gamma2 seconds.
double centroid_max_relative_error(int count = 5, std::uint64_t seed = 14);

struct DecayStats {
  double r_tilde_max_relative_error = 0.0;  // vs r~(0) e^{-kappa4 t} over 10 s
  double r_tilde_rate_error = 0.0;          // fitted rate vs kappa4, relative
  double phi_residual = 0.0;                // max |dphi/dt + kappa3 phi - r~|
  double surge_rate = 0.0;                  // fitted rate of sqrt(kappa1 w~^2 + eta~^2)
  double surge_rate_expected = 0.0;         // -Re of roots of s^2 + kappa2 s + kappa1
  double surge_rate_error = 0.0;
};
DecayStats regulation_decay();

struct EstimatorStats {
  double measured_rate = 0.0;
  double expected_rate = 0.0;  // gamma3 * lambda_min(grounded Laplacian)
  double relative_error = 0.0;
  bool rejects_disconnected = false;
  bool rejects_no_leader = false;
};
EstimatorStats estimator_convergence();

struct StepStats {
  double speed_overshoot = 0.0;    // fraction of the 2 m/s step
  double speed_settling = 0.0;     // s, last exit from the +-0.5% band
  double heading_overshoot = 0.0;  // fraction of the 300 deg step
  double heading_settling = 0.0;
  double speed_final = 0.0;
  double heading_final = 0.0;      // rad
  double speed_tail_error = 0.0;   // max relative error over the last 10% of the run
  double heading_tail_error = 0.0;
};
/// PI/PD regulation from rest towards w_r = 2 m/s and psi_r = 300 deg, run at
/// dt = 0.01 s with the scenario vessel model.
StepStats pid_step_response(double duration = 400.0);

struct Check {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::vector<std::string> suite_names();

/// Runs a suite ("all" runs every suite). Returns nullopt for an unknown name.
std::optional<std::vector<Check>> run_suite(const std::string& name);

nlohmann::json report_json(const std::string& suite, const std::vector<Check>& checks);

}  // namespace usv::cli
