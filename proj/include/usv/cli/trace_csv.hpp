#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "usv/engine.hpp"

namespace usv::cli {

// Column contract, one row per control tick:
//   t, target_x, target_y, hull_distance, V, P,
//   theta_<i>_<j> for every pair i < j (wrapped, rad),
//   then for each vessel i, in this order:
//   x, y, psi, w, v, r, tau1, tau2, sat_tau1, sat_tau2,
//   w_r, psi_r, v_r, dw_r, ddw_r, dpsi_r, ddpsi_r, varpi, dvarpi, ddvarpi,
//   e_x, e_y, eta_tilde_r, omega_tilde_r, est_x, est_y, rho, theta,
//   infeasible, held
// with the vessel index appended as "_<i>". Angles are radians, flags 0/1,
// reals printed with 17 significant digits.
std::vector<std::string> trace_columns(std::size_t n_vessels);

void write_trace_csv(std::ostream& out, const std::vector<engine::TraceRecord>& trace);
std::string trace_to_csv(const std::vector<engine::TraceRecord>& trace);

/// Inverse of write_trace_csv. Throws std::runtime_error with the line number
/// on malformed input.
std::vector<engine::TraceRecord> read_trace_csv(std::istream& in);

}  // namespace usv::cli
