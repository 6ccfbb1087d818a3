#include "usv/cli/trace_csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace usv::cli {

namespace {

constexpr const char* kVesselFields[] = {
    "x",     "y",      "psi",    "w",     "v",     "r",      "tau1",        "tau2",
    "sat_tau1", "sat_tau2", "w_r", "psi_r", "v_r", "dw_r",  "ddw_r",       "dpsi_r",
    "ddpsi_r", "varpi", "dvarpi", "ddvarpi", "e_x", "e_y", "eta_tilde_r", "omega_tilde_r",
    "est_x", "est_y",  "rho",    "theta", "infeasible", "held"};
constexpr std::size_t kPerVessel = std::size(kVesselFields);
constexpr std::size_t kHead = 6;

std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

void put(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  if (!line.empty()) line += ',';
  line += buf;
}

std::vector<double> vessel_values(const engine::VesselTrace& v) {
  const auto& s = v.state;
  const auto& f = v.ref;
  return {s.position.x(), s.position.y(), s.heading, s.surge, s.sway, s.yaw_rate,
          v.command.tau1, v.command.tau2, v.tau1_saturated ? 1.0 : 0.0,
          v.tau2_saturated ? 1.0 : 0.0, f.w_r, f.psi_r, f.v_r, f.dw_r, f.ddw_r, f.dpsi_r,
          f.ddpsi_r, f.varpi, f.dvarpi, f.ddvarpi, v.pert.e.x(), v.pert.e.y(),
          v.pert.eta_tilde_r, v.pert.omega_tilde_r, v.estimate.x(), v.estimate.y(), v.rho,
          v.theta, v.infeasible ? 1.0 : 0.0, v.held ? 1.0 : 0.0};
}

engine::VesselTrace vessel_from(const double* d) {
  engine::VesselTrace v;
  v.state.position = Vec2(d[0], d[1]);
  v.state.heading = d[2];
  v.state.surge = d[3];
  v.state.sway = d[4];
  v.state.yaw_rate = d[5];
  v.command = {d[6], d[7]};
  v.tau1_saturated = d[8] != 0.0;
  v.tau2_saturated = d[9] != 0.0;
  v.ref = {d[10], d[11], d[12], d[13], d[14], d[15], d[16], d[17], d[18], d[19]};
  v.pert.e = Vec2(d[20], d[21]);
  v.pert.eta_tilde_r = d[22];
  v.pert.omega_tilde_r = d[23];
  v.estimate = Vec2(d[24], d[25]);
  v.rho = d[26];
  v.theta = d[27];
  v.infeasible = d[28] != 0.0;
  v.held = d[29] != 0.0;
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<std::string> trace_columns(std::size_t n) {
  std::vector<std::string> cols = {"t", "target_x", "target_y", "hull_distance", "V", "P"};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      cols.push_back("theta_" + std::to_string(i) + "_" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i)
    for (const char* f : kVesselFields) cols.push_back(std::string(f) + "_" + std::to_string(i));
  return cols;
}

void write_trace_csv(std::ostream& out, const std::vector<engine::TraceRecord>& trace) {
  const std::size_t n = trace.empty() ? 0 : trace.front().vessels.size();
  std::string line;
  for (const auto& c : trace_columns(n)) {
    if (!line.empty()) line += ',';
    line += c;
  }
  out << line << '\n';
  for (const auto& rec : trace) {
    line.clear();
    for (double v : {rec.t, rec.target.x(), rec.target.y(), rec.hull_distance, rec.V, rec.P}) {
      put(line, v);
    }
    for (double v : rec.theta_ij) put(line, v);
    for (const auto& vt : rec.vessels)
      for (double v : vessel_values(vt)) put(line, v);
    out << line << '\n';
  }
}

std::string trace_to_csv(const std::vector<engine::TraceRecord>& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

std::vector<engine::TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace: missing header");
  const auto header = split(line);
  std::size_t n = 0;
  while (kHead + pair_count(n) + n * kPerVessel < header.size()) ++n;
  if (header != trace_columns(n)) throw std::runtime_error("trace:1: header does not match the column contract");

  std::vector<engine::TraceRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("trace:" + std::to_string(lineno) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(cells.size()));
    }
    std::vector<double> d(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
      char* end = nullptr;
      d[k] = std::strtod(cells[k].c_str(), &end);
      if (cells[k].empty() || *end != '\0') {
        throw std::runtime_error("trace:" + std::to_string(lineno) + ": field '" + header[k] +
                                 "' is not a number");
      }
    }
    engine::TraceRecord rec;
    rec.t = d[0];
    rec.target = Vec2(d[1], d[2]);
    rec.hull_distance = d[3];
    rec.V = d[4];
    rec.P = d[5];
    const std::size_t np = pair_count(n);
    rec.theta_ij.assign(d.begin() + kHead, d.begin() + static_cast<long>(kHead + np));
    for (std::size_t i = 0; i < n; ++i) rec.vessels.push_back(vessel_from(&d[kHead + np + i * kPerVessel]));
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace usv::cli
