#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <yaml-cpp/yaml.h>

#include "lonctl/controller.hpp"
#include "lonctl/errors.hpp"
#include "lonctl/motor.hpp"
#include "lonctl/pid.hpp"
#include "lonctl/simulation.hpp"
#include "lonctl/terrain.hpp"
#include "lonctl/vehicle.hpp"

namespace lonctl {

/// Scenario-level settings. Unset optionals fall back to the per-scenario
/// defaults in harness.hpp. `terrain` describes the non-flat test surface.
struct ScenarioConfig {
  std::string name = "set_point";
  std::optional<double> v_target_mps;
  std::optional<double> window_s;  // planner deadline; overrides controller.window_s
  std::optional<double> total_s;
  std::optional<double> rise_duration_s;
  std::optional<double> phase_s;
  TerrainProfile terrain = SinusoidalGrade{};
  SensorConfig sensors;
};

struct Config {
  VehicleParams vehicle;
  MotorParams motor;
  BrakeMap brake;
  ControllerConfig controller;
  PidConfig pid;
  ScenarioConfig scenario;
};

inline void validate(const Config& c) {
  validate(c.vehicle);
  validate(c.motor);
  validate(c.brake);
  validate(c.controller);
  validate(c.pid);
  validate(c.scenario.terrain);
  validate(c.scenario.sensors);
  const auto positive = [](const std::optional<double>& v, const char* key) {
    if (v) detail::require(std::isfinite(*v) && *v > 0.0, key, "must be > 0");
  };
  if (c.scenario.v_target_mps) {
    detail::require(std::isfinite(*c.scenario.v_target_mps) && *c.scenario.v_target_mps >= 0.0,
                    "scenario.v_target_mps", "must be >= 0");
  }
  positive(c.scenario.window_s, "scenario.window_s");
  positive(c.scenario.total_s, "scenario.total_s");
  positive(c.scenario.rise_duration_s, "scenario.rise_duration_s");
  positive(c.scenario.phase_s, "scenario.phase_s");
}

namespace detail {

/// Visits the entries of a YAML mapping, dispatching each key to a handler
/// and rejecting keys without one.
class MappingReader {
 public:
  using Handler = std::function<void(const YAML::Node&, const std::string&)>;

  MappingReader(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {}

  MappingReader& on(const std::string& key, Handler h) {
    handlers_.emplace(key, std::move(h));
    return *this;
  }

  MappingReader& number(const std::string& key, double& out) {
    return on(key, [&out](const YAML::Node& n, const std::string& p) { out = as_number(n, p); });
  }

  MappingReader& number(const std::string& key, std::optional<double>& out) {
    return on(key, [&out](const YAML::Node& n, const std::string& p) { out = as_number(n, p); });
  }

  void read() const {
    if (!node_ || node_.IsNull()) return;
    if (!node_.IsMap()) throw ConfigError(path_, "expected a mapping");
    for (const auto& entry : node_) {
      const auto key = entry.first.as<std::string>();
      const auto full = path_.empty() ? key : path_ + "." + key;
      auto it = handlers_.find(key);
      if (it == handlers_.end()) throw ConfigError(full, "unknown key");
      it->second(entry.second, full);
    }
  }

  static double as_number(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) throw ConfigError(path, "expected a number");
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      throw ConfigError(path, "expected a number, got '" + n.Scalar() + "'");
    }
  }

  template <typename T>
  static T as(const YAML::Node& n, const std::string& path, const char* expected) {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(path, std::string("expected ") + expected);
    }
  }

 private:
  const YAML::Node& node_;
  std::string path_;
  std::map<std::string, Handler> handlers_;
};

inline BrakeMap parse_brake_map(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence()) throw ConfigError(path, "expected a list of [torque_nm, percent] pairs");
  BrakeMap map;
  map.points.clear();
  for (std::size_t i = 0; i < n.size(); ++i) {
    const auto item_path = path + "[" + std::to_string(i) + "]";
    const YAML::Node& item = n[i];
    if (!item.IsSequence() || item.size() != 2) {
      throw ConfigError(item_path, "expected [torque_nm, percent]");
    }
    map.points.push_back({MappingReader::as_number(item[0], item_path),
                          MappingReader::as_number(item[1], item_path)});
  }
  return map;
}

inline std::vector<GradeSegment> parse_segments(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence()) throw ConfigError(path, "expected a list of [start_m, grade_rad] pairs");
  std::vector<GradeSegment> segs;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const auto item_path = path + "[" + std::to_string(i) + "]";
    const YAML::Node& item = n[i];
    if (!item.IsSequence() || item.size() != 2) {
      throw ConfigError(item_path, "expected [start_m, grade_rad]");
    }
    segs.push_back({MappingReader::as_number(item[0], item_path),
                    MappingReader::as_number(item[1], item_path)});
  }
  return segs;
}

inline TerrainProfile parse_terrain(const YAML::Node& n, const std::string& path) {
  std::string kind = "sinusoidal";
  SinusoidalGrade sine;
  std::vector<GradeSegment> segments;
  bool has_segments = false;
  MappingReader(n, path)
      .on("kind",
          [&](const YAML::Node& v, const std::string& p) {
            kind = MappingReader::as<std::string>(v, p, "a string");
          })
      .number("amplitude_rad", sine.amplitude_rad)
      .number("wavelength_m", sine.wavelength_m)
      .on("segments",
          [&](const YAML::Node& v, const std::string& p) {
            segments = parse_segments(v, p);
            has_segments = true;
          })
      .read();
  if (kind == "flat") return FlatTerrain{};
  if (kind == "sinusoidal") return sine;
  if (kind == "piecewise") {
    if (!has_segments) throw ConfigError(path + ".segments", "required for piecewise terrain");
    return PiecewiseGrade{segments};
  }
  throw ConfigError(path + ".kind", "expected flat, piecewise or sinusoidal, got '" + kind + "'");
}

}  // namespace detail

/// Parses a YAML configuration document. Missing keys keep their defaults;
/// unknown keys, malformed values and violated invariants raise ConfigError
/// naming the dotted key path.
inline Config parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("parse error: ") + e.what());
  }

  using detail::MappingReader;
  Config c;
  MappingReader(root, "")
      .on("vehicle",
          [&](const YAML::Node& n, const std::string& p) {
            auto& v = c.vehicle;
            MappingReader(n, p)
                .number("mass_kg", v.mass_kg)
                .number("wheel_radius_m", v.wheel_radius_m)
                .number("brake_radius_m", v.brake_radius_m)
                .number("mu_rolling", v.mu_rolling)
                .number("gravity_mps2", v.gravity_mps2)
                .number("air_density_kgpm3", v.air_density_kgpm3)
                .number("frontal_area_m2", v.frontal_area_m2)
                .number("drag_coeff", v.drag_coeff)
                .read();
          })
      .on("motor",
          [&](const YAML::Node& n, const std::string& p) {
            auto& m = c.motor;
            MappingReader(n, p)
                .number("k1", m.k1)
                .number("k2", m.k2)
                .number("ep_max_v", m.ep_max_v)
                .number("gear_ratio", m.gear_ratio)
                .number("transmission_efficiency", m.transmission_efficiency)
                .read();
          })
      .on("brake",
          [&](const YAML::Node& n, const std::string& p) {
            MappingReader(n, p)
                .on("map", [&](const YAML::Node& v,
                               const std::string& q) { c.brake = detail::parse_brake_map(v, q); })
                .read();
          })
      .on("controller",
          [&](const YAML::Node& n, const std::string& p) {
            auto& k = c.controller;
            MappingReader(n, p)
                .number("window_s", k.window_s)
                .on("n_steps",
                    [&](const YAML::Node& v, const std::string& q) {
                      k.n_steps = MappingReader::as<int>(v, q, "an integer");
                    })
                .number("accel_upper_mps2", k.accel_upper_mps2)
                .number("accel_lower_mps2", k.accel_lower_mps2)
                .number("coast_deadband_n", k.coast_deadband_n)
                .read();
          })
      .on("pid",
          [&](const YAML::Node& n, const std::string& p) {
            auto& k = c.pid;
            MappingReader(n, p)
                .number("kp", k.kp)
                .number("ki", k.ki)
                .number("kd", k.kd)
                .number("output_limit", k.output_limit)
                .number("integral_limit", k.integral_limit)
                .read();
          })
      .on("scenario",
          [&](const YAML::Node& n, const std::string& p) {
            auto& s = c.scenario;
            MappingReader(n, p)
                .on("name",
                    [&](const YAML::Node& v, const std::string& q) {
                      s.name = MappingReader::as<std::string>(v, q, "a string");
                    })
                .number("v_target_mps", s.v_target_mps)
                .number("window_s", s.window_s)
                .number("total_s", s.total_s)
                .number("rise_duration_s", s.rise_duration_s)
                .number("phase_s", s.phase_s)
                .on("terrain",
                    [&](const YAML::Node& v, const std::string& q) {
                      s.terrain = detail::parse_terrain(v, q);
                    })
                .on("sensors",
                    [&](const YAML::Node& v, const std::string& q) {
                      auto& sc = s.sensors;
                      MappingReader(v, q)
                          .on("encoder_ticks_per_rev",
                              [&](const YAML::Node& x, const std::string& r) {
                                const long ticks = MappingReader::as<long>(x, r, "an integer");
                                if (ticks < 0) throw ConfigError(r, "must be >= 0");
                                sc.encoder_ticks_per_rev = static_cast<unsigned>(ticks);
                              })
                          .number("imu_grade_noise_std_rad", sc.imu_grade_noise_std_rad)
                          .on("seed",
                              [&](const YAML::Node& x, const std::string& r) {
                                sc.seed = MappingReader::as<std::uint64_t>(x, r,
                                                                           "an unsigned integer");
                              })
                          .read();
                    })
                .read();
          })
      .read();

  if (c.scenario.window_s) c.controller.window_s = *c.scenario.window_s;
  validate(c);
  return c;
}

inline Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace lonctl
