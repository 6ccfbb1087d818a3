#include "usv/regulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "usv/ode.hpp"

namespace usv::regulation {

RegGains::RegGains(double kappa1, double kappa2, double kappa3, double kappa4)
    : k_{kappa1, kappa2, kappa3, kappa4} {
  for (double k : k_) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("gains: kappa must be positive");
  }
  if (!(kappa1 > 0.25 * kappa2 * kappa2)) {
    throw std::invalid_argument("gains: kappa1 must exceed kappa2^2/4");
  }
}

ErrorCoordinates error_coordinates(const VesselState& s, const ReferenceSignal& ref, double eta,
                                   const RegGains& g) {
  ErrorCoordinates e;
  e.w_tilde = s.surge - ref.w_r;
  e.psi_tilde = s.heading - ref.psi_r;
  e.phi = e.psi_tilde * ref.varpi;
  e.r_tilde = s.yaw_rate * ref.varpi - ref.dpsi_r * ref.varpi + e.psi_tilde * ref.dvarpi +
              g.kappa3() * e.phi;
  e.eta_tilde = eta - ref.dw_r;
  return e;
}

double backstepping_tau1_law(const VesselState& s, const ReferenceSignal& ref, double eta,
                             const RegGains& g, const DynamicsParams& p) {
  const double w_tilde = s.surge - ref.w_r;
  return (-p.k1 * s.surge - p.k2 * s.sway * s.yaw_rate + eta - g.kappa2() * w_tilde) / p.k3;
}

namespace {

// Conditional integration: an update is dropped when the unsaturated command
// is outside tau1_range and the update pushes it further out.
template <class F>
double guarded(double acc, double next, const DynamicsParams& p, F&& command_of) {
  const double before = command_of(acc);
  const double after = command_of(next);
  const bool winding_up = (after > p.tau1_range.hi && after > before) ||
                          (after < p.tau1_range.lo && after < before);
  return winding_up ? acc : next;
}

}  // namespace

std::pair<double, RegulatorState> backstepping_tau1(const VesselState& s,
                                                    const ReferenceSignal& ref,
                                                    const RegulatorState& rs, const RegGains& g,
                                                    const DynamicsParams& p, double dt) {
  RegulatorState out = rs;
  const double w_tilde = s.surge - ref.w_r;
  if (rs.primed) {
    const double next = rs.eta - 0.5 * dt * g.kappa1() * (rs.prev_w_tilde + w_tilde) +
                        (ref.dw_r - rs.prev_dw_r);
    out.eta = guarded(rs.eta, next, p,
                      [&](double eta) { return backstepping_tau1_law(s, ref, eta, g, p); });
  }
  out.primed = true;
  out.prev_w_tilde = w_tilde;
  out.prev_dw_r = ref.dw_r;
  return {backstepping_tau1_law(s, ref, out.eta, g, p), out};
}

double backstepping_tau2(const VesselState& s, const ReferenceSignal& ref, const RegGains& g,
                         const DynamicsParams& p) {
  const double k3 = g.kappa3(), k4 = g.kappa4();
  const double r = s.yaw_rate;
  const double vp = ref.varpi, dvp = ref.dvarpi, ddvp = ref.ddvarpi;
  const double psi_tilde = s.heading - ref.psi_r;
  const double r_tilde = r * vp - ref.dpsi_r * vp + psi_tilde * dvp + k3 * psi_tilde * vp;
  const double num = p.k4 * r * vp + 2.0 * r * dvp - ref.ddpsi_r * vp - 2.0 * ref.dpsi_r * dvp +
                     psi_tilde * ddvp - k3 * k3 * psi_tilde * vp + (k3 + k4) * r_tilde;
  return num / (-p.k5 * vp);
}

std::pair<double, RegulatorState> pid_tau1(const VesselState& s, const ReferenceSignal& ref,
                                           const RegulatorState& rs, const RegGains& g,
                                           const DynamicsParams& p, double dt) {
  RegulatorState out = rs;
  const double w_tilde = s.surge - ref.w_r;
  auto law = [&](double integral) {
    return -(p.k1 / p.k3) * s.surge - (p.k2 / p.k3) * s.sway * s.yaw_rate -
           (g.kappa1() / p.k3) * integral - (g.kappa2() / p.k3) * w_tilde;
  };
  if (rs.primed) {
    const double next = rs.integral_w_error + 0.5 * dt * (rs.prev_w_tilde + w_tilde);
    out.integral_w_error = guarded(rs.integral_w_error, next, p, law);
  }
  out.primed = true;
  out.prev_w_tilde = w_tilde;
  out.prev_dw_r = ref.dw_r;
  return {law(out.integral_w_error), out};
}

double pid_tau2(const VesselState& s, const ReferenceSignal& ref, const RegGains& g,
                const DynamicsParams& p) {
  const double k3 = g.kappa3(), k4 = g.kappa4();
  const double psi_tilde = s.heading - ref.psi_r;
  return -((p.k4 + k3 + k4) / p.k5) * s.yaw_rate + ((k3 * k3 - (k3 + k4) * k3) / p.k5) * psi_tilde;
}

double ChannelFit::relative_error() const {
  if (exact_convergence) return 0.0;
  return std::abs(fitted_rate - analytic_rate) / std::abs(analytic_rate);
}

double fit_decay_rate(std::span<const double> t, std::span<const double> values, bool* exact) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double a = std::abs(values[i]);
    if (!(a > 1e-300)) continue;
    const double y = std::log(a);
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
    ++n;
  }
  if (exact) *exact = n == 0;
  if (n < 2) return 0.0;
  const double dn = static_cast<double>(n);
  const double denom = dn * stt - st * st;
  if (denom == 0.0) return 0.0;
  return -(dn * sty - st * sy) / denom;
}

DecayReport error_subsystem_monitor(std::span<const ErrorSample> trace, const RegGains& g) {
  if (trace.size() < 10) throw std::invalid_argument("decay monitor: need at least 10 samples");
  std::vector<double> t, r, phi, surge;
  for (const auto& s : trace) {
    t.push_back(s.t);
    r.push_back(s.e.r_tilde);
    phi.push_back(s.e.phi);
    surge.push_back(std::sqrt(g.kappa1() * s.e.w_tilde * s.e.w_tilde +
                              s.e.eta_tilde * s.e.eta_tilde));
  }
  DecayReport rep;
  rep.r_tilde.analytic_rate = g.kappa4();
  rep.r_tilde.fitted_rate = fit_decay_rate(t, r, &rep.r_tilde.exact_convergence);
  rep.phi.analytic_rate = std::min(g.kappa3(), g.kappa4());
  rep.phi.fitted_rate = fit_decay_rate(t, phi, &rep.phi.exact_convergence);
  // Roots of s^2 + kappa2 s + kappa1 are complex under the gain invariant;
  // their real part is -kappa2/2.
  rep.surge.analytic_rate = 0.5 * g.kappa2();
  rep.surge.fitted_rate = fit_decay_rate(t, surge, &rep.surge.exact_convergence);
  return rep;
}

namespace {

struct Augmented {
  VesselState s;
  double eta = 0.0;
};
Augmented operator+(const Augmented& a, const Augmented& b) { return {a.s + b.s, a.eta + b.eta}; }
Augmented operator*(const Augmented& a, double k) { return {a.s * k, a.eta * k}; }

}  // namespace

std::vector<ClosedLoopSample> simulate_closed_loop(
    const VesselState& s0, double eta0,
    const std::function<ReferenceSignal(double t, double v)>& reference, const RegGains& g,
    const DynamicsParams& p, double duration, double dt) {
  if (!(dt > 0.0) || !(duration >= 0.0)) throw std::invalid_argument("closed loop: bad horizon");
  auto control = [&](double t, const Augmented& a) {
    const ReferenceSignal ref = reference(t, a.s.sway);
    dynamics::ActuatorCommand u{backstepping_tau1_law(a.s, ref, a.eta, g, p),
                                backstepping_tau2(a.s, ref, g, p)};
    return std::pair{ref, u};
  };
  std::vector<ClosedLoopSample> out;
  const auto steps = static_cast<long>(std::llround(duration / dt));
  Augmented a{s0, eta0};
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    const auto [ref, u] = control(t, a);
    out.push_back({t, a.s, a.eta, ref, error_coordinates(a.s, ref, a.eta, g), u});
    if (k == steps) break;
    a = rk4_step_t(a, t, dt, [&](double ts, const Augmented& y) {
      const auto [r, c] = control(ts, y);
      Augmented d;
      d.s = dynamics::state_derivative(y.s, c, p);
      d.eta = -g.kappa1() * (y.s.surge - r.w_r) + r.ddw_r;
      return d;
    });
    if (!a.s.finite() || !std::isfinite(a.eta)) throw dynamics::NumericalBlowup(t, 0);
  }
  return out;
}

}  // namespace usv::regulation
