#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "usv/engine.hpp"

namespace usv::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kBlowup = 3, kIoError = 4 };

struct RunManifest {
  std::string scenario;  // scenario file path or bundled preset name
  std::string out_dir = ".";
  std::vector<std::string> overrides;  // key=value, dotted keys
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
};

/// Loads the file when it exists, else the preset of that name, then applies
/// --seed, --duration and --set in that order. Throws ConfigError.
engine::Scenario resolve_scenario(const RunManifest& m);

nlohmann::json outcome_to_json(const engine::OutcomeReport& r);

/// Writes <out>/trace.csv and <out>/outcome.json.
int cmd_run(const RunManifest& m, std::ostream& out, std::ostream& err);

/// Writes <out>/<metric>.svg for each metric. Nothing is written if any
/// metric is unknown or the trace is empty.
int cmd_plot(const std::string& trace_path, const std::vector<std::string>& metrics,
             const std::string& out_dir, std::ostream& out, std::ostream& err);

/// Prints the JSON report and optionally writes it to report_path.
int cmd_verify(const std::string& suite, const std::string& report_path, std::ostream& out,
               std::ostream& err);

/// Lists presets, or prints one as a scenario file when `name` is given.
int cmd_presets(const std::string& name, std::ostream& out, std::ostream& err);

}  // namespace usv::cli
