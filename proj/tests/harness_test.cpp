#include "lonctl/harness.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lonctl/config.hpp"
#include "lonctl/trace_io.hpp"
#include "test_util.hpp"

namespace lonctl {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lonctl_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(LoadConfig, EmptyDocumentGivesDefaults) {
  const Config c = parse_config("");
  EXPECT_EQ(c.vehicle.mass_kg, 1250.0);
  EXPECT_EQ(c.vehicle.wheel_radius_m, 0.27);
  EXPECT_EQ(c.vehicle.brake_radius_m, 0.14);
  EXPECT_EQ(c.vehicle.mu_rolling, 0.03);
  EXPECT_EQ(c.motor.k1, 0.06692);
  EXPECT_EQ(c.motor.k2, 0.00126);
  EXPECT_EQ(c.motor.gear_ratio, 10.23);
  EXPECT_EQ(c.motor.transmission_efficiency, 0.85);
  EXPECT_EQ(c.controller.window_s, 2.0);
  EXPECT_EQ(c.controller.n_steps, 10);
  EXPECT_EQ(c.controller.accel_upper_mps2, 2.5);
  EXPECT_EQ(c.controller.coast_deadband_n, 1.0);
  ASSERT_EQ(c.brake.points.size(), 2u);
  EXPECT_EQ(c.brake.max_torque_nm(), 800.0);
}

TEST(LoadConfig, InvariantViolationNamesKey) {
  try {
    parse_config("vehicle:\n  mass_kg: -1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "vehicle.mass_kg");
  }
}

TEST(LoadConfig, UnknownKeyIsAnError) {
  try {
    parse_config("motor:\n  k3: 1.0\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "motor.k3");
  }
  EXPECT_THROW(parse_config("engine: {}\n"), ConfigError);
}

TEST(LoadConfig, MalformedInput) {
  EXPECT_THROW(parse_config("vehicle: [1, 2"), ConfigError);
  EXPECT_THROW(parse_config("vehicle:\n  mass_kg: heavy\n"), ConfigError);
  EXPECT_THROW(parse_config("controller:\n  n_steps: 2.5\n"), ConfigError);
  EXPECT_THROW(parse_config("scenario:\n  terrain:\n    kind: bumpy\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/lonctl.yaml"), ConfigError);
}

TEST(LoadConfig, OverridesAndNestedSections) {
  const Config c = parse_config(R"(
controller:
  n_steps: 20
brake:
  map: [[0, 0], [300, 40], [900, 100]]
scenario:
  name: rising
  v_target_mps: 5
  terrain:
    kind: piecewise
    segments: [[0, 0], [30, 0.06]]
  sensors:
    encoder_ticks_per_rev: 1024
    imu_grade_noise_std_rad: 0.002
    seed: 9
)");
  EXPECT_REL(c.controller.tick_s(), ControllerConfig{}.tick_s() / 2.0, 1e-12);
  EXPECT_EQ(c.brake.points.size(), 3u);
  EXPECT_EQ(c.scenario.name, "rising");
  EXPECT_EQ(*c.scenario.v_target_mps, 5.0);
  EXPECT_EQ(grade_at(c.scenario.terrain, 50.0), 0.06);
  EXPECT_EQ(c.scenario.sensors.encoder_ticks_per_rev, 1024u);
  EXPECT_EQ(c.scenario.sensors.seed, 9u);
}

TEST(LoadConfig, ScenarioWindowDrivesController) {
  const Config c = parse_config("scenario:\n  window_s: 3.0\n");
  EXPECT_EQ(c.controller.window_s, 3.0);
}

TEST(LoadConfig, BadBrakeMapIsRejected) {
  try {
    parse_config("brake:\n  map: [[0, 0], [800, 90]]\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "brake.map");
  }
}

TEST(RunMatrix, EmptySpecList) {
  const auto dir = scratch_dir("empty");
  const auto result = run_matrix({}, dir / "summary.csv");
  EXPECT_TRUE(result.ok());
  EXPECT_TRUE(result.rows.empty());
  EXPECT_EQ(read_file(dir / "summary.csv"), std::string(kSummaryHeader) + "\n");
}

TEST(RunMatrix, DefaultMatrixHasTwelveRows) {
  const auto specs = default_matrix(Config{});
  EXPECT_EQ(specs.size(), 12u);
  const auto result = run_matrix(specs);
  EXPECT_TRUE(result.ok());
  EXPECT_EQ(result.rows.size(), 12u);
}

TEST(RunMatrix, RepeatRunsWriteIdenticalFiles) {
  Config config;
  config.scenario.sensors = {2048, 0.003, 0};
  const auto a = scratch_dir("repeat_a");
  const auto b = scratch_dir("repeat_b");
  run_matrix(default_matrix(config, 5, a), a / "summary.csv");
  run_matrix(default_matrix(config, 5, b), b / "summary.csv");
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    EXPECT_EQ(read_file(entry.path()), read_file(b / name)) << name;
    ++files;
  }
  EXPECT_EQ(files, 13u);
}

TEST(RunMatrix, SummaryIsRecomputableFromTraces) {
  const auto dir = scratch_dir("audit");
  const auto config = Config{};
  run_matrix(default_matrix(config, 0, dir), dir / "summary.csv");
  std::ifstream summary(dir / "summary.csv");
  const auto rows = read_summary_csv(summary);
  ASSERT_EQ(rows.size(), 12u);
  for (const auto& row : rows) {
    const auto trace =
        read_trace_csv(dir / fmt::format("{}_{}_{}.csv", row.scenario, row.terrain,
                                         row.controller));
    const auto scenario = make_scenario(row.scenario, config.scenario, config.controller);
    const auto again = evaluate(trace, scenario.set_point_mps);
    EXPECT_REL(again.rmse_kmh, row.rmse_kmh, 1e-6);
    EXPECT_REL(again.steady_state_error_kmh, row.steady_state_error_kmh, 1e-6);
    ASSERT_EQ(again.rise_time_s.has_value(), row.rise_time_s.has_value());
    if (row.rise_time_s) {
      EXPECT_NEAR(*again.rise_time_s, *row.rise_time_s, 1e-6);
    }
  }
}

TEST(TraceCsv, HeaderAndNumberFormat) {
  RunTrace trace;
  trace.rows.push_back({0.0, 4.0, 1.0 / 3.0, 12.5, 0.0, -0.01, Mode::Drive, 100.0, 0.0});
  std::ostringstream out;
  write_trace_csv(out, trace);
  EXPECT_EQ(out.str(),
            "time_s,ref_velocity_mps,velocity_mps,ep_v,brake_percent,grade_rad,mode,"
            "wheel_torque_nm,brake_torque_nm\n"
            "0,4,0.333333333,12.5,0,-0.01,drive,100,0\n");
}

TEST(SummaryCsv, HeaderAndUndefinedRiseTime) {
  std::ostringstream out;
  write_summary_csv(out, {MetricsReport{"set_point", "flat", "pid", std::nullopt, 1.5, 0.25}});
  EXPECT_EQ(out.str(),
            "scenario,terrain,controller,rise_time_s,rmse_kmh,sse_kmh\n"
            "set_point,flat,pid,undefined,1.5,0.25\n");
}

TEST(RunSpec, UnknownIdsAreConfigErrors) {
  RunSpec spec;
  spec.scenario = "slalom";
  EXPECT_THROW(run_spec(spec), ConfigError);
  spec = {};
  spec.terrain = "mountain";
  EXPECT_THROW(run_spec(spec), ConfigError);
  spec = {};
  spec.controller = "mpc";
  EXPECT_THROW(run_spec(spec), ConfigError);
}

TEST(RunMatrix, AbortedRunIsReported) {
  Config config;
  config.vehicle.mass_kg = 1e-300;
  RunSpec spec;
  spec.controller = "pid";
  spec.config = config;
  const std::vector<RunSpec> specs{spec};
  const auto result = run_matrix(specs);
  EXPECT_FALSE(result.ok());
  EXPECT_EQ(result.errors.size(), 1u);
  EXPECT_TRUE(result.rows.empty());
}

TEST(TunePid, SearchesTheGrid) {
  PidGrid grid;
  grid.kp = {5, 50};
  grid.ki = {0, 5};
  grid.kd = {0};
  const auto best = tune_pid(Config{}, grid);
  EXPECT_EQ(best.gains.kp, 50.0);
  EXPECT_TRUE(std::isfinite(best.rmse_kmh));
}

}  // namespace
}  // namespace lonctl
