#pragma once

namespace usv {

/// One classical Runge-Kutta step of dy/dt = f(y). `State` needs `+` and
/// scalar `*`.
template <class State, class F>
State rk4_step(const State& y, double dt, F&& f) {
  const State k1 = f(y);
  const State k2 = f(y + k1 * (0.5 * dt));
  const State k3 = f(y + k2 * (0.5 * dt));
  const State k4 = f(y + k3 * dt);
  return y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
}

}  // namespace usv

namespace usv {

/// Non-autonomous variant: f(t, y).
template <class State, class F>
State rk4_step_t(const State& y, double t, double dt, F&& f) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * dt, y + k1 * (0.5 * dt));
  const State k3 = f(t + 0.5 * dt, y + k2 * (0.5 * dt));
  const State k4 = f(t + dt, y + k3 * dt);
  return y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
}

}  // namespace usv
