#pragma once

#include <string>
#include <vector>

#include "usv/engine.hpp"

namespace usv::cli {

struct Series {
  std::string label;
  std::vector<double> y;
};

/// Named time series pulled from a trace, ready to plot.
struct MetricSeries {
  std::string name;
  std::string unit;
  std::vector<double> t;
  std::vector<Series> series;
  bool wrapped = false;  // values live on [-180, 180); jumps are not joined
};

/// rho, phase, hull, V, P, w, psi, tau1, tau2
std::vector<std::string> metric_names();

/// Throws std::invalid_argument listing the available names when `name` is
/// unknown, and on an empty trace.
MetricSeries extract_metric(const std::vector<engine::TraceRecord>& trace, const std::string& name);

/// Deterministic SVG line chart with time on the abscissa.
std::string render_svg(const MetricSeries& m);

}  // namespace usv::cli
