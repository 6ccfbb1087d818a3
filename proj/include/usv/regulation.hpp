#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "usv/conversion.hpp"
#include "usv/dynamics.hpp"

namespace usv::regulation {

using conversion::ReferenceSignal;
using dynamics::DynamicsParams;
using dynamics::VesselState;

/// Regulation gains. Construction fails unless all are positive and
/// kappa1 > kappa2^2 / 4.
class RegGains {
 public:
  RegGains(double kappa1, double kappa2, double kappa3, double kappa4);
  static RegGains defaults() { return {0.02, 0.001, 0.076, 0.418}; }

  double kappa1() const { return k_[0]; }
  double kappa2() const { return k_[1]; }
  double kappa3() const { return k_[2]; }
  double kappa4() const { return k_[3]; }

 private:
  double k_[4];
};

/// Integrator memory of one vessel. `eta` belongs to the backstepping surge
/// law, `integral_w_error` to the PI form. The surge error is integrated with
/// a causal trapezoid; the reference acceleration term of eta is integrated
/// exactly as the change in dw_r, since the shaped reference acceleration
/// jumps whenever the command changes.
struct RegulatorState {
  double eta = 0.0;
  double integral_w_error = 0.0;
  double prev_w_tilde = 0.0;
  double prev_dw_r = 0.0;
  bool primed = false;
};

struct ErrorCoordinates {
  double w_tilde = 0.0;
  double psi_tilde = 0.0;
  double phi = 0.0;
  double r_tilde = 0.0;
  double eta_tilde = 0.0;  // eta - dw_r
};

ErrorCoordinates error_coordinates(const VesselState& s, const ReferenceSignal& ref, double eta,
                                   const RegGains& g);

/// Surge law for a given eta (no integrator update).
double backstepping_tau1_law(const VesselState& s, const ReferenceSignal& ref, double eta,
                             const RegGains& g, const DynamicsParams& p);

/// Advances eta by one tick, then evaluates the surge law. The update is
/// skipped when the unsaturated command is already outside tau1_range and
/// the update would push it further out.
std::pair<double, RegulatorState> backstepping_tau1(const VesselState& s,
                                                    const ReferenceSignal& ref,
                                                    const RegulatorState& rs, const RegGains& g,
                                                    const DynamicsParams& p, double dt);

double backstepping_tau2(const VesselState& s, const ReferenceSignal& ref, const RegGains& g,
                         const DynamicsParams& p);

std::pair<double, RegulatorState> pid_tau1(const VesselState& s, const ReferenceSignal& ref,
                                           const RegulatorState& rs, const RegGains& g,
                                           const DynamicsParams& p, double dt);

double pid_tau2(const VesselState& s, const ReferenceSignal& ref, const RegGains& g,
                const DynamicsParams& p);

struct ErrorSample {
  double t = 0.0;
  ErrorCoordinates e;
};

struct ChannelFit {
  double fitted_rate = 0.0;
  double analytic_rate = 0.0;
  bool exact_convergence = false;  // trace identically zero
  double relative_error() const;
};

struct DecayReport {
  ChannelFit r_tilde;
  ChannelFit phi;
  ChannelFit surge;  // energy norm sqrt(kappa1 w~^2 + eta~^2)
};

/// Least-squares fit of log magnitude against time for each error channel.
/// Throws std::invalid_argument for fewer than 10 samples.
DecayReport error_subsystem_monitor(std::span<const ErrorSample> trace, const RegGains& g);

/// Slope of log|values| against t. Samples below 1e-300 are skipped; returns
/// 0 with exact = true when no usable sample remains.
double fit_decay_rate(std::span<const double> t, std::span<const double> values, bool* exact);

struct ClosedLoopSample {
  double t = 0.0;
  VesselState state;
  double eta = 0.0;
  ReferenceSignal ref;
  ErrorCoordinates e;
  dynamics::ActuatorCommand command;
};

/// Continuous-time closed loop of the backstepping laws: the controller is
/// evaluated inside every RK4 stage and eta is integrated as part of the
/// state. Actuators are not saturated. The reference is queried as a function
/// of time and the measured sway.
std::vector<ClosedLoopSample> simulate_closed_loop(
    const VesselState& s0, double eta0,
    const std::function<ReferenceSignal(double t, double v)>& reference, const RegGains& g,
    const DynamicsParams& p, double duration, double dt);

}  // namespace usv::regulation
