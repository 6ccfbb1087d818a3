#include "usv/cli/plot_svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "usv/geometry.hpp"

namespace usv::cli {

namespace {

constexpr double kW = 800, kH = 450;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double nice_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  return (r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0) * mag;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

std::vector<std::string> metric_names() {
  return {"rho", "phase", "hull", "V", "P", "w", "psi", "tau1", "tau2"};
}

MetricSeries extract_metric(const std::vector<engine::TraceRecord>& trace, const std::string& name) {
  const auto names = metric_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown metric '" + name + "'; available: " + list);
  }
  if (trace.empty()) throw std::invalid_argument("trace is empty");
  MetricSeries m;
  m.name = name;
  const std::size_t n = trace.front().vessels.size();
  for (const auto& rec : trace) m.t.push_back(rec.t);

  auto per_vessel = [&](const std::string& prefix, auto&& get) {
    for (std::size_t i = 0; i < n; ++i) {
      Series s{prefix + "_" + std::to_string(i), {}};
      for (const auto& rec : trace) s.y.push_back(get(rec.vessels[i]));
      m.series.push_back(std::move(s));
    }
  };
  auto scalar = [&](const std::string& label, auto&& get) {
    Series s{label, {}};
    for (const auto& rec : trace) s.y.push_back(get(rec));
    m.series.push_back(std::move(s));
  };

  if (name == "rho") {
    m.unit = "m";
    per_vessel("rho", [](const engine::VesselTrace& v) { return v.rho; });
  } else if (name == "phase") {
    m.unit = "deg";
    m.wrapped = true;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        Series s{"theta_" + std::to_string(i) + std::to_string(j), {}};
        for (const auto& rec : trace) s.y.push_back(rad_to_deg(geometry::wrap_to_pi(rec.theta_ij[k])));
        m.series.push_back(std::move(s));
      }
    }
  } else if (name == "hull") {
    m.unit = "m";
    scalar("P_xo", [](const engine::TraceRecord& r) { return r.hull_distance; });
  } else if (name == "V") {
    scalar("V", [](const engine::TraceRecord& r) { return r.V; });
  } else if (name == "P") {
    scalar("P", [](const engine::TraceRecord& r) { return r.P; });
  } else if (name == "w") {
    m.unit = "m/s";
    per_vessel("w", [](const engine::VesselTrace& v) { return v.state.surge; });
  } else if (name == "psi") {
    m.unit = "deg";
    per_vessel("psi", [](const engine::VesselTrace& v) { return rad_to_deg(v.state.heading); });
  } else if (name == "tau1") {
    m.unit = "RPM";
    per_vessel("tau1", [](const engine::VesselTrace& v) { return v.command.tau1; });
  } else {
    m.unit = "deg";
    per_vessel("tau2", [](const engine::VesselTrace& v) { return rad_to_deg(v.command.tau2); });
  }
  return m;
}

std::string render_svg(const MetricSeries& m) {
  if (m.t.empty()) throw std::invalid_argument("nothing to plot");
  double t0 = m.t.front(), t1 = m.t.back();
  if (t1 <= t0) t1 = t0 + 1.0;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : m.series)
    for (double v : s.y)
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (m.wrapped) {
    lo = -180.0;
    hi = 180.0;
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  const double ystep = m.wrapped ? 60.0 : nice_step(hi - lo);
  lo = std::floor(lo / ystep) * ystep;
  hi = std::ceil(hi / ystep) * ystep;
  const double tstep = nice_step(t1 - t0);

  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto X = [&](double t) { return kLeft + (t - t0) / (t1 - t0) * pw; };
  auto Y = [&](double v) { return kTop + (hi - v) / (hi - lo) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"450\" "
       "viewBox=\"0 0 800 450\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"800\" height=\"450\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt("%.1f", kLeft) + "\" y=\"24\" font-size=\"15\">" + escape(m.name) +
       "</text>\n";
  for (double v = lo; v <= hi + 1e-9 * ystep; v += ystep) {
    const std::string y = fmt("%.2f", Y(v));
    s += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + y + "\" x2=\"" + fmt("%.2f", kLeft + pw) +
         "\" y2=\"" + y + "\" stroke=\"#e0e0e0\"/>\n";
    s += "<text x=\"" + fmt("%.2f", kLeft - 6) + "\" y=\"" + y +
         "\" text-anchor=\"end\" dominant-baseline=\"middle\">" + fmt("%g", std::abs(v) < 1e-12 * ystep ? 0.0 : v) +
         "</text>\n";
  }
  for (double t = std::ceil(t0 / tstep) * tstep; t <= t1 + 1e-9 * tstep; t += tstep) {
    const std::string x = fmt("%.2f", X(t));
    s += "<line x1=\"" + x + "\" y1=\"" + fmt("%.2f", kTop) + "\" x2=\"" + x + "\" y2=\"" +
         fmt("%.2f", kTop + ph) + "\" stroke=\"#e0e0e0\"/>\n";
    s += "<text x=\"" + x + "\" y=\"" + fmt("%.2f", kTop + ph + 18) + "\" text-anchor=\"middle\">" +
         fmt("%g", t) + "</text>\n";
  }
  s += "<rect x=\"" + fmt("%.2f", kLeft) + "\" y=\"" + fmt("%.2f", kTop) + "\" width=\"" +
       fmt("%.2f", pw) + "\" height=\"" + fmt("%.2f", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + fmt("%.2f", kLeft + pw / 2) + "\" y=\"" + fmt("%.2f", kH - 10) +
       "\" text-anchor=\"middle\">t [s]</text>\n";
  if (!m.unit.empty()) {
    s += "<text x=\"16\" y=\"" + fmt("%.2f", kTop + ph / 2) + "\" transform=\"rotate(-90 16 " +
         fmt("%.2f", kTop + ph / 2) + ")\" text-anchor=\"middle\">[" + escape(m.unit) + "]</text>\n";
  }

  for (std::size_t k = 0; k < m.series.size(); ++k) {
    const auto& ser = m.series[k];
    const char* color = kColors[k % std::size(kColors)];
    std::string pts;
    auto flush = [&]() {
      if (!pts.empty()) {
        s += std::string("<polyline fill=\"none\" stroke=\"") + color +
             "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
      }
      pts.clear();
    };
    for (std::size_t i = 0; i < ser.y.size() && i < m.t.size(); ++i) {
      if (!std::isfinite(ser.y[i])) {
        flush();
        continue;
      }
      if (m.wrapped && i > 0 && std::abs(ser.y[i] - ser.y[i - 1]) > 180.0) flush();
      if (!pts.empty()) pts += ' ';
      pts += fmt("%.2f", X(m.t[i])) + "," + fmt("%.2f", Y(ser.y[i]));
    }
    flush();
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    const double lx = kLeft + pw + 12;
    s += "<line x1=\"" + fmt("%.2f", lx) + "\" y1=\"" + fmt("%.2f", ly) + "\" x2=\"" +
         fmt("%.2f", lx + 20) + "\" y2=\"" + fmt("%.2f", ly) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fmt("%.2f", lx + 26) + "\" y=\"" + fmt("%.2f", ly) +
         "\" dominant-baseline=\"middle\">" + escape(ser.label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace usv::cli
