#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lonctl/errors.hpp"
#include "lonctl/terrain.hpp"

namespace lonctl {

/// Point-mass vehicle constants. Defaults describe the reference test car
/// (1250 kg, 0.27 m tyres, 0.14 m brake radius, dry asphalt).
struct VehicleParams {
  double mass_kg = 1250.0;
  double wheel_radius_m = 0.27;
  double brake_radius_m = 0.14;
  double mu_rolling = 0.03;
  double gravity_mps2 = 9.81;
  double air_density_kgpm3 = 1.225;
  double frontal_area_m2 = 2.0;
  double drag_coeff = 0.35;
};

inline void validate(const VehicleParams& p) {
  using detail::require;
  require(std::isfinite(p.mass_kg) && p.mass_kg > 0.0, "vehicle.mass_kg", "must be > 0");
  require(std::isfinite(p.wheel_radius_m) && p.wheel_radius_m > 0.0, "vehicle.wheel_radius_m",
          "must be > 0");
  require(std::isfinite(p.brake_radius_m) && p.brake_radius_m > 0.0, "vehicle.brake_radius_m",
          "must be > 0");
  require(p.mu_rolling >= 0.0 && p.mu_rolling < 1.0, "vehicle.mu_rolling", "must be in [0, 1)");
  require(std::isfinite(p.gravity_mps2) && p.gravity_mps2 > 0.0, "vehicle.gravity_mps2",
          "must be > 0");
  require(std::isfinite(p.air_density_kgpm3) && p.air_density_kgpm3 >= 0.0,
          "vehicle.air_density_kgpm3", "must be >= 0");
  require(std::isfinite(p.frontal_area_m2) && p.frontal_area_m2 >= 0.0, "vehicle.frontal_area_m2",
          "must be >= 0");
  require(std::isfinite(p.drag_coeff) && p.drag_coeff >= 0.0, "vehicle.drag_coeff",
          "must be >= 0");
}

struct VehicleState {
  double velocity_mps = 0.0;
  double wheel_speed_radps = 0.0;  // always velocity_mps / wheel_radius_m
  double distance_m = 0.0;
  double grade_rad = 0.0;
};

/// Builds a kinematically consistent state at `distance_m` on `terrain`.
inline VehicleState make_state(double velocity_mps, const VehicleParams& params,
                               const TerrainProfile& terrain, double distance_m = 0.0) {
  return {velocity_mps, velocity_mps / params.wheel_radius_m, distance_m,
          grade_at(terrain, distance_m)};
}

/// Forces acting during one plant step, in newtons.
/// net_n = driving_n - rolling_n - gradient_n - aero_n.
struct ForceBreakdown {
  double rolling_n = 0.0;
  double gradient_n = 0.0;
  double aero_n = 0.0;
  double driving_n = 0.0;
  double net_n = 0.0;
};

inline double rolling_resistance(const VehicleParams& p, double grade_rad) {
  return p.mu_rolling * p.mass_kg * p.gravity_mps2 * std::cos(grade_rad);
}

/// Signed by pitch: negative downhill.
inline double gradient_force(const VehicleParams& p, double grade_rad) {
  return p.mass_kg * p.gravity_mps2 * std::sin(grade_rad);
}

inline double aero_force(const VehicleParams& p, double velocity_mps) {
  return 0.5 * p.air_density_kgpm3 * p.frontal_area_m2 * velocity_mps * velocity_mps *
         p.drag_coeff;
}

inline double driving_force(double wheel_torque_nm, double brake_torque_nm,
                            const VehicleParams& p) {
  return wheel_torque_nm / p.wheel_radius_m - brake_torque_nm / p.brake_radius_m;
}

inline ForceBreakdown force_breakdown(const VehicleState& state, double wheel_torque_nm,
                                      double brake_torque_nm, const VehicleParams& p) {
  ForceBreakdown f;
  f.rolling_n = rolling_resistance(p, state.grade_rad);
  f.gradient_n = gradient_force(p, state.grade_rad);
  f.aero_n = aero_force(p, state.velocity_mps);
  f.driving_n = driving_force(wheel_torque_nm, brake_torque_nm, p);
  f.net_n = f.driving_n - f.rolling_n - f.gradient_n - f.aero_n;
  return f;
}

/// One explicit-Euler step of the longitudinal dynamics.
///
/// Rolling resistance, aerodynamic drag and brake force are reactive: they
/// oppose motion but never reverse it. At standstill the vehicle only moves
/// off when motor torque plus any downhill gravity component exceeds them.
/// Velocity is clamped at zero; the vehicle never rolls backwards.
inline VehicleState plant_step(const VehicleState& state, double wheel_torque_nm,
                               double brake_torque_nm, const VehicleParams& params,
                               const TerrainProfile& terrain, double dt_s) {
  detail::require_finite(state.velocity_mps, "velocity");
  detail::require_finite(state.distance_m, "distance");
  detail::require_finite(state.grade_rad, "grade");
  detail::require_finite(wheel_torque_nm, "wheel torque");
  detail::require_finite(brake_torque_nm, "brake torque");
  detail::require_finite(dt_s, "time step");
  if (dt_s <= 0.0) throw std::invalid_argument("plant_step: dt_s must be > 0");

  const ForceBreakdown f = force_breakdown(state, wheel_torque_nm, brake_torque_nm, params);
  detail::require_finite(f.net_n, "net force");
  double v_next = 0.0;
  if (state.velocity_mps > 0.0) {
    v_next = std::max(0.0, state.velocity_mps + dt_s * f.net_n / params.mass_kg);
  } else if (f.net_n > 0.0) {
    v_next = dt_s * f.net_n / params.mass_kg;
  }

  VehicleState next;
  next.velocity_mps = v_next;
  next.distance_m = state.distance_m + state.velocity_mps * dt_s;
  next.grade_rad = grade_at(terrain, next.distance_m);
  next.wheel_speed_radps = v_next / params.wheel_radius_m;
  detail::require_finite(next.velocity_mps, "velocity");
  detail::require_finite(next.distance_m, "distance");
  detail::require_finite(next.grade_rad, "grade");
  return next;
}

}  // namespace lonctl
