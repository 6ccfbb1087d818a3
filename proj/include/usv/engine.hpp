#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "usv/conversion.hpp"
#include "usv/dynamics.hpp"
#include "usv/protocols.hpp"
#include "usv/regulation.hpp"

namespace usv::engine {

struct Waypoint {
  Vec2 position = Vec2::Zero();
  double speed = 0.0;  // speed on the leg that ends here, m/s
};

struct TargetTrajectory {
  enum class Kind { Static, ConstantVelocity, Waypoints };
  Kind kind = Kind::Static;
  Vec2 start = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  std::vector<Waypoint> waypoints;  // first entry is the start; holds at the last

  Vec2 position(double t) const;
  void validate() const;
};

enum class Approach { A1Centralized, A1Decentralized, A2 };
enum class Regulator { Backstepping, Pid };

std::string to_string(Approach a);
std::string to_string(Regulator r);
std::optional<Approach> approach_from_string(const std::string& s);
std::optional<Regulator> regulator_from_string(const std::string& s);

struct Area {
  Vec2 lo{-20.0, -20.0};
  Vec2 hi{20.0, 20.0};
};

struct Thresholds {
  double hull = 0.1;                  // m
  double rho = 0.2;                   // m
  double phase = deg_to_rad(5.0);     // rad
  double window = 5.0;                // s
};

/// Vessel model used by the scenarios: identified coefficients with the
/// steering gain read per degree and a bidirectional propeller range.
dynamics::DynamicsParams vessel_model();

struct Scenario {
  std::string name = "custom";
  std::vector<dynamics::VesselState> vessels;  // empty: random placement
  std::size_t random_count = 3;
  Area area;
  TargetTrajectory target;
  Approach approach = Approach::A2;
  Regulator regulator = Regulator::Backstepping;
  protocols::SwarmConfig swarm;
  regulation::RegGains gains = regulation::RegGains::defaults();
  dynamics::DynamicsParams params = vessel_model();
  double duration = 200.0;
  double dt_phys = 0.01;
  double dt_ctrl = 0.2;
  double dt_reg = 0.01;
  std::uint64_t seed = 1;
  double ref_tau = 0.4;   // reference prefilter time constant, s
  double u_min = 0.0;     // below this commanded speed the course is held, m/s
  Thresholds thresholds;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  std::vector<dynamics::VesselState> initial_states() const;
  std::size_t substeps() const;      // dt_ctrl / dt_phys
  std::size_t reg_substeps() const;  // dt_reg / dt_phys
};

struct VesselTrace {
  dynamics::VesselState state;
  dynamics::ActuatorCommand command;
  bool tau1_saturated = false;
  bool tau2_saturated = false;
  conversion::ReferenceSignal ref;
  conversion::PerturbationRecord pert;
  Vec2 estimate = Vec2::Zero();
  double rho = 0.0;
  double theta = 0.0;  // unwrapped
  bool infeasible = false;
  bool held = false;
};

struct TraceRecord {
  double t = 0.0;
  Vec2 target = Vec2::Zero();
  std::vector<VesselTrace> vessels;
  double hull_distance = 0.0;
  double V = 0.0;
  double P = 0.0;
  std::vector<double> theta_ij;  // wrapped, pairs (i, j) with i < j in row-major order
};

struct OutcomeReport {
  std::optional<double> surrounded_at;
  std::optional<double> equally_surrounded_at;
  bool surrounded_at_end = false;
  bool equally_surrounded_at_end = false;
  double final_hull_distance = 0.0;
  double final_rho_error = 0.0;    // max_i |rho_i - rho_o|
  double final_phase_error = 0.0;  // max adjacent gap error, rad
  double rho_error_rate = 0.0;     // fitted decay rate of max_i |rho_i - rho_o|
  double perturbation_rate = 0.0;  // fitted decay rate of max_i ||e_i||
  std::size_t infeasible_events = 0;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  OutcomeReport outcome;
};

/// Full stack simulation. Throws dynamics::NumericalBlowup.
RunResult run(const Scenario& sc);

OutcomeReport detect_outcomes(const std::vector<TraceRecord>& trace,
                              const protocols::SwarmConfig& swarm, const Thresholds& th);

/// Kinematic run with zero perturbation: integrates the commanded velocity
/// (Approach 1, plus the estimator) or the polar rates (Approach 2).
std::vector<TraceRecord> ideal_mode_run(const Scenario& sc);

/// Sorted adjacent angular gaps of the unwrapped angles, rad, summing to 2pi.
std::vector<double> adjacent_gaps(const std::vector<double>& thetas);

}  // namespace usv::engine
