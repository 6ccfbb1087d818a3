#include "usv/conversion.hpp"

#include <cmath>
#include <stdexcept>

#include "usv/geometry.hpp"

namespace usv::conversion {

std::optional<CourseReference> cartesian_to_reference(const Vec2& u_r, double v_r,
                                                      std::optional<double> prev_psi_r) {
  const double speed = u_r.norm();
  if (!(speed > std::abs(v_r))) return std::nullopt;
  CourseReference c;
  c.w_r = std::sqrt(speed * speed - v_r * v_r);
  const double raw = std::atan2(u_r.y(), u_r.x()) - std::atan(v_r / c.w_r);
  c.psi_r = geometry::unwrap(prev_psi_r, geometry::wrap_to_pi(raw));
  return c;
}

CourseCommand resolve_course(const Vec2& u_r, double v_r, double prev_psi_r, double u_min) {
  CourseCommand out;
  const auto ref = cartesian_to_reference(u_r, v_r, prev_psi_r);
  out.infeasible = !ref.has_value();
  if (ref && u_r.norm() >= u_min) {
    out.ref = *ref;
    return out;
  }
  out.held = true;
  out.ref.psi_r = prev_psi_r;
  out.ref.w_r = u_r.dot(Vec2(std::cos(prev_psi_r), std::sin(prev_psi_r)));
  return out;
}

Vec2 polar_to_cartesian_command(double eta_r, double omega_r, double rho, double theta) {
  return dynamics::rotation(theta) * Vec2(eta_r, rho * omega_r);
}

std::optional<protocols::PolarState> cartesian_to_polar(const Vec2& x_i, const Vec2& x_o,
                                                        std::optional<double> prev_theta,
                                                        double rho_min) {
  const Vec2 d = x_i - x_o;
  const double rho = d.norm();
  if (!(rho > rho_min)) return std::nullopt;
  return protocols::PolarState{rho, geometry::unwrap(prev_theta, std::atan2(d.y(), d.x()))};
}

PerturbationRecord perturbation(const dynamics::VesselState& s, const ReferenceSignal& ref,
                                double rho, double theta) {
  PerturbationRecord out;
  out.e = dynamics::rotation(s.heading) * Vec2(s.surge, s.sway) -
          dynamics::rotation(ref.psi_r) * Vec2(ref.w_r, ref.v_r);
  if (rho > 0.0) {
    const Vec2 q = dynamics::rotation(theta).transpose() * out.e;
    out.eta_tilde_r = q.x();
    out.omega_tilde_r = q.y() / rho;
  }
  return out;
}

Varpi varpi_from(double w, double dw, double ddw) {
  const double v = std::sqrt(1.0 + w * w);
  const double g = w * dw;
  return {v, g / v, (dw * dw + w * ddw) / v - g * g / (v * v * v)};
}

SecondOrderFilter::SecondOrderFilter(double tau, double y0, double dy0)
    : wn_(1.0 / tau), y_(y0), dy_(dy0), command_(y0) {
  if (!(tau > 0.0)) throw std::invalid_argument("filter: time constant must be positive");
}

void SecondOrderFilter::advance(double dt) {
  const double e0 = y_ - command_;
  const double b = dy_ + wn_ * e0;
  const double decay = std::exp(-wn_ * dt);
  y_ = command_ + (e0 + b * dt) * decay;
  dy_ = (b - wn_ * (e0 + b * dt)) * decay;
}

ReferenceShaper::ReferenceShaper(double tau, const dynamics::VesselState& s0)
    : w_(tau, s0.surge), psi_(tau, s0.heading, s0.yaw_rate) {}

void ReferenceShaper::set_command(const CourseReference& c) {
  w_.set_command(c.w_r);
  psi_.set_command(c.psi_r);
}

void ReferenceShaper::advance(double dt) {
  w_.advance(dt);
  psi_.advance(dt);
}

ReferenceSignal ReferenceShaper::signal(double v_r) const {
  ReferenceSignal r;
  r.w_r = w_.y();
  r.dw_r = w_.dy();
  r.ddw_r = w_.ddy();
  r.psi_r = psi_.y();
  r.dpsi_r = psi_.dy();
  r.ddpsi_r = psi_.ddy();
  r.v_r = v_r;
  const Varpi vp = varpi_from(r.w_r, r.dw_r, r.ddw_r);
  r.varpi = vp.value;
  r.dvarpi = vp.d1;
  r.ddvarpi = vp.d2;
  return r;
}

}  // namespace usv::conversion
