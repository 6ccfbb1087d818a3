#pragma once

#include <optional>

#include "usv/dynamics.hpp"
#include "usv/protocols.hpp"
#include "usv/types.hpp"

namespace usv::conversion {

struct CourseReference {
  double w_r = 0.0;
  double psi_r = 0.0;  // unwrapped
};

/// Speed and course that reproduce the planar velocity `u_r` given sway
/// `v_r`. Returns nullopt when ||u_r|| <= |v_r|.
std::optional<CourseReference> cartesian_to_reference(const Vec2& u_r, double v_r,
                                                      std::optional<double> prev_psi_r);

/// Course command with a fallback for commands too small or infeasible to
/// steer by. Below `u_min` or when infeasible the previous course is held and
/// the surge reference is the projection of u_r onto that course.
struct CourseCommand {
  CourseReference ref;
  bool infeasible = false;
  bool held = false;
};

CourseCommand resolve_course(const Vec2& u_r, double v_r, double prev_psi_r, double u_min);

Vec2 polar_to_cartesian_command(double eta_r, double omega_r, double rho, double theta);

/// Returns nullopt when ||x_i - x_o|| <= rho_min.
std::optional<protocols::PolarState> cartesian_to_polar(const Vec2& x_i, const Vec2& x_o,
                                                        std::optional<double> prev_theta,
                                                        double rho_min = 0.1);

struct ReferenceSignal {
  double w_r = 0.0;
  double psi_r = 0.0;
  double v_r = 0.0;
  double dw_r = 0.0;
  double ddw_r = 0.0;
  double dpsi_r = 0.0;
  double ddpsi_r = 0.0;
  double varpi = 1.0;
  double dvarpi = 0.0;
  double ddvarpi = 0.0;
};

struct PerturbationRecord {
  Vec2 e = Vec2::Zero();
  double eta_tilde_r = 0.0;
  double omega_tilde_r = 0.0;
};

/// e = S(psi)[w; v] - S(psi_r)[w_r; v_r] and its polar components. The polar
/// pair is left at zero when rho <= 0.
PerturbationRecord perturbation(const dynamics::VesselState& s, const ReferenceSignal& ref,
                                double rho, double theta);

/// Bounding signal sqrt(1 + w^2) with its first two time derivatives.
struct Varpi {
  double value, d1, d2;
};
Varpi varpi_from(double w, double dw, double ddw);

/// Critically damped second-order prefilter y'' = wn^2 (c - y) - 2 wn y'.
/// Advances exactly for a command held over the step.
class SecondOrderFilter {
 public:
  SecondOrderFilter(double tau, double y0, double dy0 = 0.0);

  void set_command(double c) { command_ = c; }
  double command() const { return command_; }
  void advance(double dt);

  double y() const { return y_; }
  double dy() const { return dy_; }
  double ddy() const { return wn_ * wn_ * (command_ - y_) - 2.0 * wn_ * dy_; }

 private:
  double wn_;
  double y_;
  double dy_;
  double command_;
};

/// Turns piecewise-constant course commands into a smooth reference with
/// exact derivatives. Starts at the vessel's own speed and heading.
class ReferenceShaper {
 public:
  ReferenceShaper(double tau, const dynamics::VesselState& s0);

  void set_command(const CourseReference& c);
  void advance(double dt);

  /// Current course reference (unwrapped), used as the unwrap anchor.
  double psi_r() const { return psi_.y(); }
  ReferenceSignal signal(double v_r) const;

 private:
  SecondOrderFilter w_;
  SecondOrderFilter psi_;
};

}  // namespace usv::conversion
