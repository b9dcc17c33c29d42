#include <CLI11.hpp>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sfs/sfs.hpp"

namespace {

constexpr const char* kVersion = "sfs 0.1.0";

int do_check(const std::string& config_path) {
  try {
    const sfs::Scenario scenario = sfs::scenario_from_file(config_path);
    const auto diagnostics = sfs::validate(scenario);
    for (const auto& d : diagnostics)
      std::cerr << "invalid: " << d.field << ": " << d.message << "\n";
    if (!diagnostics.empty()) return 2;
    std::cout << "ok: " << scenario.sources.size() << " sources, "
              << scenario.control_points.size() << " control points, "
              << scenario.frequencies.size() << " frequencies\n";
    return 0;
  } catch (const sfs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

int do_run(const std::string& config_path, const std::string& methods_csv,
           const std::string& out_dir, double freq_step, int threads,
           std::uint64_t seed) {
  sfs::Scenario scenario;
  sfs::RunOptions options;
  try {
    const auto json = sfs::load_json_file(config_path);
    scenario = sfs::scenario_from_json(json);
    options.field_plane = sfs::field_plane_from_json(json);

    if (freq_step > 0.0) {
      if (scenario.frequencies.empty())
        throw sfs::ConfigError("frequencies_hz", "empty grid");
      const double start = scenario.frequencies.front();
      const double stop = scenario.frequencies.back();
      scenario.frequencies.clear();
      for (double f = start; f <= stop + 1e-9; f += freq_step)
        scenario.frequencies.push_back(f);
    }

    options.methods.clear();
    std::stringstream ss(methods_csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
      const auto m = sfs::method_from_label(token);
      if (!m) throw sfs::ConfigError("--methods", "unknown method '" + token + "'");
      options.methods.push_back(*m);
    }
    if (options.methods.empty())
      throw sfs::ConfigError("--methods", "no methods selected");
    options.threads = threads;
    options.seed = seed;

    const auto diagnostics = sfs::validate(scenario);
    for (const auto& d : diagnostics)
      std::cerr << "invalid: " << d.field << ": " << d.message << "\n";
    if (!diagnostics.empty()) return 2;
  } catch (const sfs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    const sfs::RunResult result =
        sfs::run_and_write(scenario, options, out_dir, config_path, kVersion);
    for (const auto& m : result.methods)
      std::cout << "wrote " << out_dir << "/metrics_" << sfs::method_label(m.method)
                << ".csv (" << m.metrics.size() << " rows)\n";
    std::cout << "wrote " << out_dir << "/manifest.txt\n";
    return 0;
  } catch (const sfs::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sound field synthesis driving-signal solver with directional "
               "exterior-radiation suppression"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string methods = "am,am-rad,am-rad-dir";
  std::string out_dir = "out";
  double freq_step = 0.0;
  int threads = 1;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "run the experiment described by a scenario config");
  run->add_option("config", config_path, "scenario config (JSON)")->required();
  run->add_option("--methods", methods, "comma list of am,am-rad,am-rad-dir");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--freq-step", freq_step, "override the frequency grid step (Hz)");
  run->add_option("--threads", threads, "worker threads across frequencies");
  run->add_option("--seed", seed, "seed recorded in the manifest");

  auto* check = app.add_subcommand("check", "validate a scenario config without running");
  check->add_option("config", config_path, "scenario config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) return do_check(config_path);
  return do_run(config_path, methods, out_dir, freq_step, threads, seed);
}
