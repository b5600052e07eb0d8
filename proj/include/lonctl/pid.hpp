#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "lonctl/controller.hpp"
#include "lonctl/errors.hpp"
#include "lonctl/motor.hpp"

namespace lonctl {

/// Velocity-error PID baseline. The signed demand is split into a throttle
/// channel (positive) and a brake channel (negative), each scaled linearly so
/// that |demand| = output_limit saturates the actuator.
///
/// Default gains come from `lonctl tune-pid` on the flat set-point scenario.
struct PidConfig {
  double kp = 1000.0;
  double ki = 10.0;
  double kd = 0.0;
  double output_limit = 100.0;
  double integral_limit = 50.0;
};

inline void validate(const PidConfig& c) {
  using detail::require;
  require(std::isfinite(c.kp) && c.kp >= 0.0, "pid.kp", "must be >= 0");
  require(std::isfinite(c.ki) && c.ki >= 0.0, "pid.ki", "must be >= 0");
  require(std::isfinite(c.kd) && c.kd >= 0.0, "pid.kd", "must be >= 0");
  require(std::isfinite(c.output_limit) && c.output_limit > 0.0, "pid.output_limit",
          "must be > 0");
  require(std::isfinite(c.integral_limit) && c.integral_limit > 0.0, "pid.integral_limit",
          "must be > 0");
}

struct PidState {
  double integral = 0.0;
  std::optional<double> prev_error;  // empty before the first step: no derivative kick
};

struct PidOutput {
  PidState state;
  double demand = 0.0;
};

inline PidOutput pid_step(const PidConfig& config, const PidState& state, double error_mps,
                          double dt_s) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("pid_step: dt_s must be > 0");
  PidState next;
  next.integral = std::clamp(state.integral + error_mps * dt_s, -config.integral_limit,
                             config.integral_limit);
  next.prev_error = error_mps;
  const double derivative = state.prev_error ? (error_mps - *state.prev_error) / dt_s : 0.0;
  const double raw = config.kp * error_mps + config.ki * next.integral + config.kd * derivative;
  return {next, std::clamp(raw, -config.output_limit, config.output_limit)};
}

inline ControlCommand demand_to_command(double demand, const PidConfig& config,
                                        const MotorParams& mparams) {
  const double frac = std::clamp(demand / config.output_limit, -1.0, 1.0);
  if (frac > 0.0) return ControlCommand::drive(frac * mparams.ep_max_v);
  if (frac < 0.0) return ControlCommand::brake(-frac * 100.0);
  return ControlCommand::coast();
}

}  // namespace lonctl
