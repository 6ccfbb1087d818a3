#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "usv/types.hpp"

namespace usv::dynamics {

/// Planar pose plus body-frame velocities. Heading is kept unwrapped.
struct VesselState {
  Vec2 position = Vec2::Zero();
  double heading = 0.0;
  double surge = 0.0;  // w
  double sway = 0.0;   // v
  double yaw_rate = 0.0;

  bool finite() const;
};

VesselState operator+(const VesselState& a, const VesselState& b);
VesselState operator*(const VesselState& a, double s);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct DynamicsParams {
  double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0, k5 = 0.0, k6 = 0.0, k7 = 0.0;
  Range tau1_range;  // RPM
  Range tau2_range;  // rad

  /// Identified coefficients of the prototype vessel, taken literally, with
  /// the hardware actuator limits.
  static DynamicsParams identified();

  /// Throws std::invalid_argument on k3 == 0, k5 == 0, an empty range or a
  /// non-finite coefficient.
  void validate() const;
};

struct ActuatorCommand {
  double tau1 = 0.0;  // propeller speed, RPM
  double tau2 = 0.0;  // steering angle, rad
};

struct SaturatedCommand {
  ActuatorCommand command;
  bool tau1_saturated = false;
  bool tau2_saturated = false;
  bool any() const { return tau1_saturated || tau2_saturated; }
};

/// S(a).
Mat2 rotation(double a);

/// Right-hand side of the kinematics and the identified surge/yaw/sway model.
/// Throws std::invalid_argument on non-finite input.
VesselState state_derivative(const VesselState& s, const ActuatorCommand& u,
                             const DynamicsParams& p);

class NumericalBlowup : public std::runtime_error {
 public:
  NumericalBlowup(double time, std::size_t vessel);
  double time() const { return time_; }
  std::size_t vessel() const { return vessel_; }

 private:
  double time_;
  std::size_t vessel_;
};

/// RK4 advance with the command held constant over dt. Throws
/// NumericalBlowup{time, vessel} when the result is not finite.
VesselState step(const VesselState& s, const ActuatorCommand& u,
                 const DynamicsParams& p, double dt, double time = 0.0,
                 std::size_t vessel = 0);

SaturatedCommand saturate(const ActuatorCommand& u, const DynamicsParams& p);

}  // namespace usv::dynamics
