#include "usv/cli/app.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "usv/cli/plot_svg.hpp"
#include "usv/cli/scenario_io.hpp"
#include "usv/cli/trace_csv.hpp"
#include "usv/cli/verify.hpp"
#include "usv/presets.hpp"

namespace usv::cli {

namespace fs = std::filesystem;
using nlohmann::json;

engine::Scenario resolve_scenario(const RunManifest& m) {
  std::vector<std::string> sets;
  if (m.seed) sets.push_back("seed=" + std::to_string(*m.seed));
  if (m.duration) {
    std::ostringstream d;
    d << std::setprecision(17) << *m.duration;
    sets.push_back("duration=" + d.str());
  }
  sets.insert(sets.end(), m.overrides.begin(), m.overrides.end());

  if (fs::exists(m.scenario)) return load_scenario_file(m.scenario, sets);
  const auto p = engine::preset(m.scenario);
  if (!p) {
    std::string names;
    for (const auto& n : engine::preset_names()) names += " " + n;
    throw ConfigError("'" + m.scenario + "' is neither a scenario file nor a preset (presets:" + names +
                      ")");
  }
  json j = scenario_to_json(*p);
  for (const auto& s : sets) apply_override(j, s);
  try {
    return scenario_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError("preset " + m.scenario + ": " + e.what());
  }
}

namespace {

json optional_time(const std::optional<double>& t) { return t ? json(*t) : json(nullptr); }

bool ensure_dir(const std::string& dir, std::ostream& err) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create " << dir << ": " << ec.message() << "\n";
    return false;
  }
  return true;
}

}  // namespace

json outcome_to_json(const engine::OutcomeReport& r) {
  return {{"surrounded_at", optional_time(r.surrounded_at)},
          {"equally_surrounded_at", optional_time(r.equally_surrounded_at)},
          {"surrounded_at_end", r.surrounded_at_end},
          {"equally_surrounded_at_end", r.equally_surrounded_at_end},
          {"final_hull_distance", r.final_hull_distance},
          {"final_rho_error", r.final_rho_error},
          {"final_phase_error_deg", rad_to_deg(r.final_phase_error)},
          {"rho_error_rate", r.rho_error_rate},
          {"perturbation_rate", r.perturbation_rate},
          {"infeasible_events", r.infeasible_events}};
}

int cmd_run(const RunManifest& m, std::ostream& out, std::ostream& err) {
  engine::Scenario sc;
  try {
    sc = resolve_scenario(m);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  engine::RunResult res;
  try {
    res = engine::run(sc);
  } catch (const dynamics::NumericalBlowup& e) {
    err << "blow-up: " << e.what() << "\n";
    return kBlowup;
  }

  if (!ensure_dir(m.out_dir, err)) return kIoError;
  const fs::path dir(m.out_dir);
  {
    std::ofstream f(dir / "trace.csv", std::ios::binary);
    write_trace_csv(f, res.trace);
    if (!f) {
      err << "error: cannot write " << (dir / "trace.csv").string() << "\n";
      return kIoError;
    }
  }
  json report = {{"scenario", sc.name},
                 {"approach", engine::to_string(sc.approach)},
                 {"regulator", engine::to_string(sc.regulator)},
                 {"seed", sc.seed},
                 {"duration", sc.duration},
                 {"vessels", res.trace.empty() ? 0 : res.trace.front().vessels.size()},
                 {"outcome", outcome_to_json(res.outcome)}};
  {
    std::ofstream f(dir / "outcome.json");
    f << report.dump(2) << "\n";
    if (!f) {
      err << "error: cannot write " << (dir / "outcome.json").string() << "\n";
      return kIoError;
    }
  }
  out << report.dump(2) << "\n";
  return kOk;
}

int cmd_plot(const std::string& trace_path, const std::vector<std::string>& metrics,
             const std::string& out_dir, std::ostream& out, std::ostream& err) {
  std::ifstream in(trace_path);
  if (!in) {
    err << "error: cannot open " << trace_path << "\n";
    return kIoError;
  }
  std::vector<MetricSeries> series;
  try {
    const auto trace = read_trace_csv(in);
    for (const auto& name : metrics) series.push_back(extract_metric(trace, name));
  } catch (const std::exception& e) {
    err << "error: " << trace_path << ": " << e.what() << "\n";
    return kConfigError;
  }
  if (!ensure_dir(out_dir, err)) return kIoError;
  for (const auto& s : series) {
    const fs::path file = fs::path(out_dir) / (s.name + ".svg");
    std::ofstream f(file, std::ios::binary);
    f << render_svg(s);
    if (!f) {
      err << "error: cannot write " << file.string() << "\n";
      return kIoError;
    }
    out << file.string() << "\n";
  }
  return kOk;
}

int cmd_verify(const std::string& suite, const std::string& report_path, std::ostream& out,
               std::ostream& err) {
  const auto checks = run_suite(suite);
  if (!checks) {
    err << "error: unknown suite '" << suite << "' (available:";
    for (const auto& n : suite_names()) err << " " << n;
    err << ")\n";
    return kConfigError;
  }
  const json report = report_json(suite, *checks);
  out << report.dump(2) << "\n";
  if (!report_path.empty()) {
    std::ofstream f(report_path);
    f << report.dump(2) << "\n";
    if (!f) {
      err << "error: cannot write " << report_path << "\n";
      return kIoError;
    }
  }
  return report["passed"].get<bool>() ? kOk : kCheckFailed;
}

int cmd_presets(const std::string& name, std::ostream& out, std::ostream& err) {
  if (name.empty()) {
    for (const auto& n : engine::preset_names())
      out << std::left << std::setw(26) << n << engine::preset_description(n) << "\n";
    return kOk;
  }
  const auto p = engine::preset(name);
  if (!p) {
    err << "error: unknown preset '" << name << "'\n";
    return kConfigError;
  }
  out << scenario_to_json(*p).dump(2) << "\n";
  return kOk;
}

}  // namespace usv::cli
