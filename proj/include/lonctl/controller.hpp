#pragma once

#include <cmath>
#include <stdexcept>
#include <string_view>

#include "lonctl/errors.hpp"
#include "lonctl/motor.hpp"
#include "lonctl/vehicle.hpp"

namespace lonctl {

/// Shrinking-domain speed controller.
///
/// The planner hands over a target speed V_T that must be reached within a
/// window of `window_s` seconds. The window is split into `n_steps` control
/// ticks. At tick i the remaining horizon is t = window_s * (1 - i / n_steps)
/// and the controller solves the one-step force balance
///
///     f = M (V_T - U) / t + F_gradient + F_rolling
///
/// for the wheel force that closes the velocity error by the deadline. No
/// prediction is made beyond the current tick. Positive f drives, negative f
/// brakes, and a small dead-band around zero releases both actuators.
struct ControllerConfig {
  double window_s = 2.0;
  int n_steps = 10;
  double accel_upper_mps2 = 2.5;
  double accel_lower_mps2 = 0.0;
  double coast_deadband_n = 1.0;

  double tick_s() const { return window_s / n_steps; }
};

inline void validate(const ControllerConfig& c) {
  using detail::require;
  require(std::isfinite(c.window_s) && c.window_s > 0.0, "controller.window_s", "must be > 0");
  require(c.n_steps >= 1, "controller.n_steps", "must be >= 1");
  require(std::isfinite(c.accel_upper_mps2) && c.accel_upper_mps2 > c.accel_lower_mps2,
          "controller.accel_upper_mps2", "must exceed accel_lower_mps2");
  require(c.accel_lower_mps2 >= 0.0, "controller.accel_lower_mps2", "must be >= 0");
  require(std::isfinite(c.coast_deadband_n) && c.coast_deadband_n >= 0.0,
          "controller.coast_deadband_n", "must be >= 0");
}

struct Measurement {
  double velocity_mps = 0.0;
  double grade_rad = 0.0;
  double wheel_speed_radps = 0.0;
};

enum class Mode { Coast, Drive, Brake };

constexpr std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Drive: return "drive";
    case Mode::Brake: return "brake";
    case Mode::Coast: return "coast";
  }
  return "coast";
}

/// Actuator command. At most one of `ep_v` and `brake_percent` is non-zero.
struct ControlCommand {
  double ep_v = 0.0;
  double brake_percent = 0.0;
  Mode mode = Mode::Coast;

  static ControlCommand coast() { return {}; }
  static ControlCommand drive(double ep_v) {
    return ep_v > 0.0 ? ControlCommand{ep_v, 0.0, Mode::Drive} : coast();
  }
  static ControlCommand brake(double percent) {
    return percent > 0.0 ? ControlCommand{0.0, percent, Mode::Brake} : coast();
  }
};

/// Remaining horizon at tick `i`; rejects i >= n_steps where it would vanish.
inline double horizon_time(const ControllerConfig& config, int i) {
  if (i < 0 || i >= config.n_steps) {
    throw std::out_of_range("horizon index must lie in [0, n_steps - 1]");
  }
  return config.window_s * (1.0 - static_cast<double>(i) / config.n_steps);
}

inline double required_force(double U, double v_target, double t, double mass_kg,
                             double f_gradient_n, double f_rolling_n) {
  return mass_kg * (v_target - U) / t + f_gradient_n + f_rolling_n;
}

/// Limits the implied acceleration |V_T - U| / t to the upper bound by moving
/// the target toward U. Demands under the lower bound pass through.
inline double clamp_demand(double U, double v_target, double t, const ControllerConfig& config) {
  const double demand = (v_target - U) / t;
  if (std::abs(demand) <= config.accel_upper_mps2) return v_target;
  return U + std::copysign(config.accel_upper_mps2 * t, demand);
}

inline Mode select_mode(double f_required_n, double deadband_n = 1.0) {
  if (f_required_n > deadband_n) return Mode::Drive;
  if (f_required_n < -deadband_n) return Mode::Brake;
  return Mode::Coast;
}

/// Full controller tick: horizon, hindrance forces from the measured grade
/// (aerodynamic drag is left out), demand clamp, force balance, mode
/// selection, and conversion to pedal commands. Saturates rather than throws
/// when the motor cannot deliver the demand.
inline ControlCommand control_step(const Measurement& meas, double v_target, int i,
                                   const ControllerConfig& config, const VehicleParams& vparams,
                                   const MotorParams& mparams, const BrakeMap& bmap) {
  const double t = horizon_time(config, i);
  const double f_gradient = gradient_force(vparams, meas.grade_rad);
  const double target = clamp_demand(meas.velocity_mps, v_target, t, config);
  // At standstill rolling resistance only reacts to an applied push.
  const bool pushing = meas.velocity_mps > 0.0 ||
                       vparams.mass_kg * (target - meas.velocity_mps) / t + f_gradient > 0.0;
  const double f_rolling = pushing ? rolling_resistance(vparams, meas.grade_rad) : 0.0;
  const double f = required_force(meas.velocity_mps, target, t, vparams.mass_kg, f_gradient,
                                  f_rolling);

  switch (select_mode(f, config.coast_deadband_n)) {
    case Mode::Drive: {
      const double wheel_torque = vparams.wheel_radius_m * f;
      const double shaft_torque = motor_torque_from_wheel(wheel_torque, mparams);
      const double omega = motor_speed_from_wheel(meas.wheel_speed_radps, mparams);
      double ep = mparams.ep_max_v;
      try {
        ep = pedal_from_motor_torque(shaft_torque, omega, mparams);
      } catch (const UnachievableTorque&) {
      }
      return ControlCommand::drive(ep);
    }
    case Mode::Brake: {
      const double brake_torque = -vparams.brake_radius_m * f;
      return ControlCommand::brake(brake_pedal_from_torque(brake_torque, bmap));
    }
    case Mode::Coast:
      break;
  }
  return ControlCommand::coast();
}

}  // namespace lonctl
