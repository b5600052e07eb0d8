#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "lonctl/controller.hpp"
#include "lonctl/errors.hpp"
#include "lonctl/motor.hpp"
#include "lonctl/pid.hpp"
#include "lonctl/profile.hpp"
#include "lonctl/terrain.hpp"
#include "lonctl/vehicle.hpp"

namespace lonctl {

/// Wheel encoder and IMU models. `encoder_ticks_per_rev == 0` selects an
/// ideal encoder; the defaults are ideal sensors.
struct SensorConfig {
  unsigned encoder_ticks_per_rev = 0;
  double imu_grade_noise_std_rad = 0.0;
  std::uint64_t seed = 0;
};

inline void validate(const SensorConfig& s) {
  detail::require(std::isfinite(s.imu_grade_noise_std_rad) && s.imu_grade_noise_std_rad >= 0.0,
                  "scenario.sensors.imu_grade_noise_std_rad", "must be >= 0");
}

/// Speed resolution of an encoder counting whole ticks over `interval_s`.
inline double encoder_speed_resolution(unsigned ticks_per_rev, double wheel_radius_m,
                                       double interval_s) {
  return 2.0 * std::numbers::pi * wheel_radius_m / ticks_per_rev / interval_s;
}

/// Samples the sensors. Velocity is the tick count over the controller
/// interval, so it is truncated to the encoder resolution; grade gets
/// zero-mean Gaussian noise drawn from `rng`.
inline Measurement sense(const VehicleState& state, const SensorConfig& cfg,
                         const VehicleParams& vparams, double interval_s, std::mt19937_64& rng) {
  Measurement m{state.velocity_mps, state.grade_rad, state.wheel_speed_radps};
  if (cfg.encoder_ticks_per_rev > 0) {
    const double res =
        encoder_speed_resolution(cfg.encoder_ticks_per_rev, vparams.wheel_radius_m, interval_s);
    m.velocity_mps = std::floor(state.velocity_mps / res) * res;
    m.wheel_speed_radps = m.velocity_mps / vparams.wheel_radius_m;
  }
  if (cfg.imu_grade_noise_std_rad > 0.0) {
    std::normal_distribution<double> noise(0.0, cfg.imu_grade_noise_std_rad);
    constexpr double kLimit = std::numbers::pi / 2.0 - 1e-6;
    m.grade_rad = std::clamp(state.grade_rad + noise(rng), -kLimit, kLimit);
  }
  return m;
}

struct ShrinkingDomain {
  ControllerConfig config;
};

struct Pid {
  PidConfig config;
};

using Controller = std::variant<ShrinkingDomain, Pid>;

inline std::string controller_id(const Controller& c) {
  return std::holds_alternative<ShrinkingDomain>(c) ? "shrinking_domain" : "pid";
}

/// Everything about the car and its sensors that a closed-loop run needs.
struct Plant {
  VehicleParams vehicle;
  MotorParams motor;
  BrakeMap brake;
  SensorConfig sensors;
};

struct TraceRow {
  double time_s = 0.0;
  double ref_velocity_mps = 0.0;
  double velocity_mps = 0.0;
  double ep_v = 0.0;
  double brake_percent = 0.0;
  double grade_rad = 0.0;
  Mode mode = Mode::Coast;
  double wheel_torque_nm = 0.0;
  double brake_torque_nm = 0.0;
};

/// One row per plant tick, uniformly spaced at `dt_s`, including t = 0 and
/// the final time.
struct RunTrace {
  double dt_s = 0.0;
  std::vector<TraceRow> rows;
};

namespace detail {

/// Controller-side state threaded through a run.
struct ShrinkingDomainRuntime {
  const ControllerConfig& config;
  long tick = 0;
  double v_target = 0.0;

  double next_tick_time() const { return tick * config.tick_s(); }

  /// The planner hands over, at each window start, the velocity the profile
  /// asks for at that window's deadline.
  ControlCommand update(double t, const Measurement& meas, const ReferenceProfile& profile,
                        const Plant& plant) {
    const int i = static_cast<int>(tick % config.n_steps);
    if (i == 0) v_target = profile.at(t + config.window_s);
    ++tick;
    return control_step(meas, v_target, i, config, plant.vehicle, plant.motor, plant.brake);
  }
};

}  // namespace detail

/// Runs `controller` against the simulated car for `total_s` seconds.
///
/// The plant advances with fixed step `dt_s`. The shrinking-domain controller
/// runs every window_s / n_steps seconds and the PID every plant step; the
/// last command is held in between. Throws NonFiniteState if the simulation
/// diverges.
inline RunTrace run_closed_loop(const Controller& controller, const ReferenceProfile& profile,
                                const TerrainProfile& terrain, const Plant& plant, double dt_s,
                                double total_s, double initial_velocity_mps = 0.0) {
  if (!(dt_s > 0.0) || !std::isfinite(dt_s)) throw std::invalid_argument("dt_s must be > 0");
  if (!(total_s >= 0.0) || !std::isfinite(total_s)) {
    throw std::invalid_argument("total_s must be >= 0");
  }
  const long n_ticks = std::lround(total_s / dt_s);
  constexpr double kTickSlack = 1e-9;

  RunTrace trace;
  trace.dt_s = dt_s;
  trace.rows.reserve(static_cast<std::size_t>(n_ticks) + 1);

  std::mt19937_64 rng(plant.sensors.seed);
  VehicleState state = make_state(initial_velocity_mps, plant.vehicle, terrain);
  ControlCommand cmd;

  const auto* sd = std::get_if<ShrinkingDomain>(&controller);
  const auto* pid = std::get_if<Pid>(&controller);
  std::optional<detail::ShrinkingDomainRuntime> sd_rt;
  if (sd) sd_rt.emplace(detail::ShrinkingDomainRuntime{sd->config});
  PidState pid_state;

  for (long k = 0; k <= n_ticks; ++k) {
    const double t = k * dt_s;
    const double ref = profile.at(t);
    if (sd_rt) {
      if (t + kTickSlack >= sd_rt->next_tick_time()) {
        const Measurement meas =
            sense(state, plant.sensors, plant.vehicle, sd->config.tick_s(), rng);
        cmd = sd_rt->update(t, meas, profile, plant);
      }
    } else {
      const Measurement meas = sense(state, plant.sensors, plant.vehicle, dt_s, rng);
      const PidOutput out = pid_step(pid->config, pid_state, ref - meas.velocity_mps, dt_s);
      pid_state = out.state;
      cmd = demand_to_command(out.demand, pid->config, plant.motor);
    }

    const double omega_motor = motor_speed_from_wheel(state.wheel_speed_radps, plant.motor);
    const double wheel_torque =
        wheel_torque_from_motor(motor_torque(cmd.ep_v, omega_motor, plant.motor), plant.motor);
    const double brake_torque = brake_torque_from_pedal(cmd.brake_percent, plant.brake);

    trace.rows.push_back({t, ref, state.velocity_mps, cmd.ep_v, cmd.brake_percent,
                          state.grade_rad, cmd.mode, wheel_torque, brake_torque});

    if (k < n_ticks) {
      try {
        state = plant_step(state, wheel_torque, brake_torque, plant.vehicle, terrain, dt_s);
      } catch (const NonFiniteState& e) {
        throw NonFiniteState(std::string(e.what()) + " at t=" + std::to_string(t) + " s");
      }
    }
  }
  return trace;
}

}  // namespace lonctl
