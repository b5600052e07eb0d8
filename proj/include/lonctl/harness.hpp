#pragma once

#include <array>
#include <filesystem>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lonctl/config.hpp"
#include "lonctl/metrics.hpp"
#include "lonctl/simulation.hpp"
#include "lonctl/trace_io.hpp"

namespace lonctl {

inline constexpr std::array<std::string_view, 3> kScenarioIds{"set_point", "rising",
                                                              "stop_and_go"};
inline constexpr std::array<std::string_view, 2> kTerrainIds{"flat", "gradient"};
inline constexpr std::array<std::string_view, 2> kControllerIds{"shrinking_domain", "pid"};
inline constexpr double kDefaultDt = 0.01;

/// A reference profile together with the set-point its rise time is measured
/// against.
struct Scenario {
  std::string id;
  ReferenceProfile profile;
  double set_point_mps = 0.0;
  double total_s = 0.0;
};

/// Scenario defaults: set-point 4 m/s over 20 s; rising ramp to 4 m/s over
/// 10 s, 20 s total; stop-and-go peaking at 3 m/s with 5 s phases, 30 s total.
inline Scenario make_scenario(std::string_view id, const ScenarioConfig& sc,
                              const ControllerConfig& controller) {
  if (id == "set_point") {
    const double v = sc.v_target_mps.value_or(4.0);
    const double total = sc.total_s.value_or(20.0);
    return {std::string(id), make_set_point_profile(v, controller.window_s, total), v, total};
  }
  if (id == "rising") {
    const double v = sc.v_target_mps.value_or(4.0);
    const double total = sc.total_s.value_or(20.0);
    return {std::string(id), make_rising_profile(v, sc.rise_duration_s.value_or(10.0), total), v,
            total};
  }
  if (id == "stop_and_go") {
    const double v = sc.v_target_mps.value_or(3.0);
    const double total = sc.total_s.value_or(30.0);
    return {std::string(id), make_stop_and_go_profile(v, sc.phase_s.value_or(5.0), total), v,
            total};
  }
  throw ConfigError("scenario.name", "unknown scenario '" + std::string(id) + "'");
}

inline TerrainProfile make_terrain(std::string_view id, const ScenarioConfig& sc) {
  if (id == "flat") return FlatTerrain{};
  if (id == "gradient") return sc.terrain;
  throw ConfigError("scenario.terrain", "unknown terrain '" + std::string(id) + "'");
}

inline Controller make_controller(std::string_view id, const Config& config) {
  if (id == "shrinking_domain") return ShrinkingDomain{config.controller};
  if (id == "pid") return Pid{config.pid};
  throw ConfigError("controller", "unknown controller '" + std::string(id) + "'");
}

inline Plant make_plant(const Config& config) {
  return {config.vehicle, config.motor, config.brake, config.scenario.sensors};
}

struct RunSpec {
  std::string scenario = "set_point";
  std::string terrain = "flat";
  std::string controller = "shrinking_domain";
  Config config;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> output;  // trace CSV, not written when empty
  double dt_s = kDefaultDt;
};

struct RunOutcome {
  MetricsReport report;
  RunTrace trace;
};

inline RunOutcome run_spec(const RunSpec& spec) {
  const Scenario scenario = make_scenario(spec.scenario, spec.config.scenario,
                                          spec.config.controller);
  Plant plant = make_plant(spec.config);
  plant.sensors.seed = spec.seed;
  RunOutcome out;
  out.trace = run_closed_loop(make_controller(spec.controller, spec.config), scenario.profile,
                              make_terrain(spec.terrain, spec.config.scenario), plant, spec.dt_s,
                              scenario.total_s);
  out.report = evaluate(out.trace, scenario.set_point_mps);
  out.report.scenario = spec.scenario;
  out.report.terrain = spec.terrain;
  out.report.controller = spec.controller;
  if (spec.output) write_trace_csv(*spec.output, out.trace);
  return out;
}

/// Every scenario x terrain x controller combination, traces under `out_dir`.
inline std::vector<RunSpec> default_matrix(const Config& config, std::uint64_t seed = 0,
                                           const std::optional<std::filesystem::path>& out_dir =
                                               std::nullopt,
                                           double dt_s = kDefaultDt) {
  std::vector<RunSpec> specs;
  for (auto s : kScenarioIds) {
    for (auto t : kTerrainIds) {
      for (auto c : kControllerIds) {
        RunSpec spec{std::string(s), std::string(t), std::string(c), config, seed, std::nullopt,
                     dt_s};
        if (out_dir) spec.output = *out_dir / fmt::format("{}_{}_{}.csv", s, t, c);
        specs.push_back(std::move(spec));
      }
    }
  }
  return specs;
}

struct MatrixResult {
  std::vector<MetricsReport> rows;
  std::vector<std::string> errors;  // one message per aborted run

  bool ok() const { return errors.empty(); }
};

/// Runs all specs concurrently; summary rows keep the order of `specs`.
/// Aborted runs are reported in `errors` and omitted from `rows`.
inline MatrixResult run_matrix(const std::vector<RunSpec>& specs,
                               const std::optional<std::filesystem::path>& summary_path =
                                   std::nullopt) {
  std::vector<std::future<RunOutcome>> futures;
  futures.reserve(specs.size());
  for (const auto& spec : specs) {
    futures.push_back(std::async(std::launch::async, [&spec] { return run_spec(spec); }));
  }
  MatrixResult result;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    try {
      result.rows.push_back(futures[i].get().report);
    } catch (const std::exception& e) {
      result.errors.push_back(fmt::format("{}/{}/{}: {}", specs[i].scenario, specs[i].terrain,
                                          specs[i].controller, e.what()));
    }
  }
  if (summary_path) write_summary_csv(*summary_path, result.rows);
  return result;
}

struct PidGrid {
  std::vector<double> kp{1, 2, 5, 10, 20, 50, 100, 200, 500, 1000};
  std::vector<double> ki{0, 0.5, 1, 2, 5, 10, 20, 50};
  std::vector<double> kd{0, 0.5, 1, 2, 5};
};

struct TuneResult {
  PidConfig gains;
  double rmse_kmh = std::numeric_limits<double>::infinity();
};

/// Exhaustive search for the PID gains with the lowest RMSE on the flat
/// set-point scenario. Limits are taken from `config.pid`.
inline TuneResult tune_pid(const Config& config, const PidGrid& grid = {},
                           double dt_s = kDefaultDt) {
  const Scenario scenario = make_scenario("set_point", config.scenario, config.controller);
  const Plant plant = make_plant(config);
  TuneResult best;
  for (double kp : grid.kp) {
    for (double ki : grid.ki) {
      for (double kd : grid.kd) {
        PidConfig gains = config.pid;
        gains.kp = kp;
        gains.ki = ki;
        gains.kd = kd;
        const RunTrace trace = run_closed_loop(Pid{gains}, scenario.profile, FlatTerrain{}, plant,
                                               dt_s, scenario.total_s);
        const double e = rmse(trace);
        if (e < best.rmse_kmh) best = {gains, e};
      }
    }
  }
  return best;
}

}  // namespace lonctl
