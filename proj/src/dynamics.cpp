#include "usv/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "usv/ode.hpp"

namespace usv::dynamics {

bool VesselState::finite() const {
  return position.allFinite() && std::isfinite(heading) && std::isfinite(surge) &&
         std::isfinite(sway) && std::isfinite(yaw_rate);
}

VesselState operator+(const VesselState& a, const VesselState& b) {
  return {a.position + b.position, a.heading + b.heading, a.surge + b.surge,
          a.sway + b.sway, a.yaw_rate + b.yaw_rate};
}

VesselState operator*(const VesselState& a, double s) {
  return {a.position * s, a.heading * s, a.surge * s, a.sway * s, a.yaw_rate * s};
}

DynamicsParams DynamicsParams::identified() {
  DynamicsParams p;
  p.k1 = -0.098;
  p.k2 = 0.003;
  p.k3 = 0.005;
  p.k4 = -0.1055;
  p.k5 = 0.019;
  p.k6 = -0.091;
  p.k7 = -0.0175;
  p.tau1_range = {600.0, 11000.0};
  p.tau2_range = {-deg_to_rad(20.0), deg_to_rad(20.0)};
  return p;
}

void DynamicsParams::validate() const {
  for (double k : {k1, k2, k3, k4, k5, k6, k7}) {
    if (!std::isfinite(k)) throw std::invalid_argument("dynamics: non-finite coefficient");
  }
  if (k3 == 0.0) throw std::invalid_argument("dynamics: k3 must be nonzero");
  if (k5 == 0.0) throw std::invalid_argument("dynamics: k5 must be nonzero");
  if (!(tau1_range.lo <= tau1_range.hi)) throw std::invalid_argument("dynamics: empty tau1 range");
  if (!(tau2_range.lo <= tau2_range.hi)) throw std::invalid_argument("dynamics: empty tau2 range");
}

Mat2 rotation(double a) {
  const double c = std::cos(a);
  const double s = std::sin(a);
  Mat2 m;
  m << c, -s, s, c;
  return m;
}

VesselState state_derivative(const VesselState& s, const ActuatorCommand& u,
                             const DynamicsParams& p) {
  if (!s.finite() || !std::isfinite(u.tau1) || !std::isfinite(u.tau2)) {
    throw std::invalid_argument("state_derivative: non-finite input");
  }
  const double w = s.surge, v = s.sway, r = s.yaw_rate;
  VesselState d;
  d.position = rotation(s.heading) * Vec2(w, v);
  d.heading = r;
  d.surge = p.k1 * w + p.k2 * v * r + p.k3 * u.tau1;
  d.yaw_rate = p.k4 * r + p.k5 * u.tau2;
  d.sway = p.k6 * v + p.k7 * w * r;
  return d;
}

namespace {
std::string blowup_message(double time, std::size_t vessel) {
  std::ostringstream os;
  os << "numerical blow-up at t=" << time << " s, vessel " << vessel;
  return os.str();
}
}  // namespace

NumericalBlowup::NumericalBlowup(double time, std::size_t vessel)
    : std::runtime_error(blowup_message(time, vessel)), time_(time), vessel_(vessel) {}

VesselState step(const VesselState& s, const ActuatorCommand& u, const DynamicsParams& p,
                 double dt, double time, std::size_t vessel) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  VesselState next;
  try {
    next = rk4_step(s, dt, [&](const VesselState& y) { return state_derivative(y, u, p); });
  } catch (const std::invalid_argument&) {
    throw NumericalBlowup(time, vessel);
  }
  if (!next.finite()) throw NumericalBlowup(time, vessel);
  return next;
}

SaturatedCommand saturate(const ActuatorCommand& u, const DynamicsParams& p) {
  SaturatedCommand out;
  out.command.tau1 = p.tau1_range.clamp(u.tau1);
  out.command.tau2 = p.tau2_range.clamp(u.tau2);
  out.tau1_saturated = out.command.tau1 != u.tau1;
  out.tau2_saturated = out.command.tau2 != u.tau2;
  return out;
}

}  // namespace usv::dynamics
