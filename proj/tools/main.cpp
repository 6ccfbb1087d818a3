#include <iostream>

#include <CLI11.hpp>

#include "usv/cli/app.hpp"
#include "usv/cli/plot_svg.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multi-USV surrounding control simulator"};
  app.require_subcommand(1);

  usv::cli::RunManifest manifest;
  std::uint64_t seed = 0;
  double duration = 0.0;
  auto* run = app.add_subcommand("run", "Simulate a scenario file or preset; writes trace.csv and outcome.json");
  run->add_option("scenario", manifest.scenario, "Scenario JSON file or preset name")->required();
  run->add_option("--out", manifest.out_dir, "Output directory")->capture_default_str();
  auto* seed_opt = run->add_option("--seed", seed, "Random placement seed");
  auto* dur_opt = run->add_option("--duration", duration, "Simulated time, s");
  run->add_option("--set", manifest.overrides, "Override a scenario key, e.g. --set swarm.beta2=0.1");

  std::string trace;
  std::vector<std::string> metrics;
  std::string plot_out = ".";
  auto* plot = app.add_subcommand("plot", "Render trace metrics as SVG");
  plot->add_option("trace", trace, "Trace CSV written by run")->required();
  plot->add_option("--metric", metrics, "Metric name (repeatable): rho, phase, hull, V, P, w, psi, tau1, tau2")
      ->required();
  plot->add_option("--out", plot_out, "Output directory")->capture_default_str();

  std::string suite = "all";
  std::string report;
  auto* verify = app.add_subcommand("verify", "Run a property verification suite");
  verify->add_option("suite", suite, "geometry, gradient, lyapunov, regulation, estimator or all")
      ->capture_default_str();
  verify->add_option("--out", report, "Also write the JSON report to this file");

  std::string preset;
  auto* presets = app.add_subcommand("presets", "List bundled scenarios or print one as JSON");
  presets->add_option("name", preset, "Preset to print");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    if (*seed_opt) manifest.seed = seed;
    if (*dur_opt) manifest.duration = duration;
    return usv::cli::cmd_run(manifest, std::cout, std::cerr);
  }
  if (*plot) return usv::cli::cmd_plot(trace, metrics, plot_out, std::cout, std::cerr);
  if (*verify) return usv::cli::cmd_verify(suite, report, std::cout, std::cerr);
  return usv::cli::cmd_presets(preset, std::cout, std::cerr);
}
