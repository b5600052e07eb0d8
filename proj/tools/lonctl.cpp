// Command-line front end: single runs, the full comparison matrix, and PID
// gain tuning.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lonctl/config.hpp"
#include "lonctl/harness.hpp"
#include "lonctl/trace_io.hpp"

namespace {

constexpr int kExitAborted = 1;
constexpr int kExitConfig = 2;

void print_table(const std::vector<lonctl::MetricsReport>& rows) {
  fmt::print("{:<12} {:<9} {:<17} {:>12} {:>10} {:>10}\n", "scenario", "terrain", "controller",
             "rise_time_s", "rmse_kmh", "sse_kmh");
  for (const auto& r : rows) {
    fmt::print("{:<12} {:<9} {:<17} {:>12} {:>10.4f} {:>10.4f}\n", r.scenario, r.terrain,
               r.controller, r.rise_time_s ? fmt::format("{:.3f}", *r.rise_time_s) : "undefined",
               r.rmse_kmh, r.steady_state_error_kmh);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Longitudinal speed-control simulator and controller benchmark"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::uint64_t seed = 0;
  double dt = lonctl::kDefaultDt;
  std::string out;
  std::string scenario;
  std::string terrain = "flat";
  std::string controller = "shrinking_domain";

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "YAML configuration file");
    cmd->add_option("--seed", seed, "Sensor noise seed")->capture_default_str();
    cmd->add_option("--dt", dt, "Plant time step [s]")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Simulate one scenario/terrain/controller combination");
  add_common(run);
  run->add_option("--scenario", scenario, "set_point | rising | stop_and_go (default: config)");
  run->add_option("--terrain", terrain, "flat | gradient")->capture_default_str();
  run->add_option("--controller", controller, "shrinking_domain | pid")->capture_default_str();
  run->add_option("--out", out, "Trace CSV path");

  auto* compare = app.add_subcommand("compare", "Run the full scenario x terrain x controller matrix");
  add_common(compare);
  std::string out_dir = "out";
  compare->add_option("--out", out_dir, "Output directory for traces and summary.csv")
      ->capture_default_str();

  auto* tune = app.add_subcommand("tune-pid", "Grid-search PID gains on the flat set-point run");
  add_common(tune);

  CLI11_PARSE(app, argc, argv);

  lonctl::Config config;
  try {
    if (config_path) config = lonctl::load_config(*config_path);
  } catch (const lonctl::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  }

  try {
    if (*run) {
      lonctl::RunSpec spec;
      spec.scenario = scenario.empty() ? config.scenario.name : scenario;
      spec.terrain = terrain;
      spec.controller = controller;
      spec.config = config;
      spec.seed = seed;
      spec.dt_s = dt;
      if (!out.empty()) spec.output = out;
      const auto result = lonctl::run_spec(spec);
      print_table({result.report});
      return 0;
    }

    if (*compare) {
      std::filesystem::create_directories(out_dir);
      const auto specs = lonctl::default_matrix(config, seed, std::filesystem::path(out_dir), dt);
      const auto result =
          lonctl::run_matrix(specs, std::filesystem::path(out_dir) / "summary.csv");
      print_table(result.rows);
      for (const auto& err : result.errors) fmt::print(stderr, "run aborted: {}\n", err);
      return result.ok() ? 0 : kExitAborted;
    }

    if (*tune) {
      const auto best = lonctl::tune_pid(config, {}, dt);
      fmt::print("# flat set-point RMSE {:.4f} km/h\npid:\n  kp: {}\n  ki: {}\n  kd: {}\n",
                 best.rmse_kmh, best.gains.kp, best.gains.ki, best.gains.kd);
      return 0;
    }
  } catch (const lonctl::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(stderr, "run aborted: {}\n", e.what());
    return kExitAborted;
  }
  return 0;
}
