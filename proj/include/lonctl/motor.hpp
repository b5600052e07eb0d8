#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lonctl/errors.hpp"

namespace lonctl {

/// Reduced induction-motor model T = k1 * Ep^2 * (1 - k2 * w) plus a
/// single-stage gearbox.
///
/// k1 and k2 are the manufacturer constants of the reference drive. The
/// default command range (`ep_max_v` = 48) is the inverter supply voltage:
/// with a 5 V ceiling these constants give at most 1.67 N*m at the shaft,
/// about 54 N at the tyre, which cannot overcome the rolling resistance of a
/// 1250 kg car. Set `ep_max_v = 5` to reproduce the literal pedal range.
struct MotorParams {
  double k1 = 0.06692;  // N*m / V^2
  double k2 = 0.00126;  // s / rad, 1/k2 is the synchronous shaft speed
  double ep_max_v = 48.0;
  double gear_ratio = 10.23;
  double transmission_efficiency = 0.85;
};

inline void validate(const MotorParams& p) {
  using detail::require;
  require(std::isfinite(p.k1) && p.k1 > 0.0, "motor.k1", "must be > 0");
  require(std::isfinite(p.k2) && p.k2 > 0.0, "motor.k2", "must be > 0");
  require(std::isfinite(p.ep_max_v) && p.ep_max_v > 0.0, "motor.ep_max_v", "must be > 0");
  require(std::isfinite(p.gear_ratio) && p.gear_ratio > 0.0, "motor.gear_ratio", "must be > 0");
  require(p.transmission_efficiency > 0.0 && p.transmission_efficiency <= 1.0,
          "motor.transmission_efficiency", "must be in (0, 1]");
}

/// Shaft speed seen by the motor for a given wheel speed.
inline double motor_speed_from_wheel(double wheel_speed_radps, const MotorParams& p) {
  return wheel_speed_radps * p.gear_ratio;
}

/// Motor torque for command voltage `ep_v` at shaft speed `omega_radps`.
/// Floored at zero: no regenerative torque above synchronous speed.
inline double motor_torque(double ep_v, double omega_radps, const MotorParams& p) {
  return std::max(0.0, p.k1 * ep_v * ep_v * (1.0 - p.k2 * omega_radps));
}

/// Largest torque the motor can deliver at `omega_radps`.
inline double max_motor_torque(double omega_radps, const MotorParams& p) {
  return motor_torque(p.ep_max_v, omega_radps, p);
}

/// Smallest command voltage that yields `torque_nm` at `omega_radps`,
/// saturated at `ep_max_v`.
///
/// Throws UnachievableTorque when a positive torque is requested at or above
/// synchronous speed, where no voltage produces torque.
inline double pedal_from_motor_torque(double torque_nm, double omega_radps, const MotorParams& p) {
  if (torque_nm <= 0.0) return 0.0;
  const double slip_factor = 1.0 - p.k2 * omega_radps;
  if (slip_factor <= 0.0) {
    throw UnachievableTorque("requested motor torque at or beyond synchronous speed");
  }
  return std::min(std::sqrt(torque_nm / (p.k1 * slip_factor)), p.ep_max_v);
}

inline double wheel_torque_from_motor(double motor_torque_nm, const MotorParams& p) {
  return motor_torque_nm * p.gear_ratio * p.transmission_efficiency;
}

inline double motor_torque_from_wheel(double wheel_torque_nm, const MotorParams& p) {
  return wheel_torque_nm / (p.gear_ratio * p.transmission_efficiency);
}

/// Brake torque to pedal-percentage characteristic, piecewise linear.
struct BrakeMapPoint {
  double torque_nm = 0.0;
  double percent = 0.0;
};

struct BrakeMap {
  // (0, 0) and (T_max, 100) anchors, strictly increasing in both coordinates.
  std::vector<BrakeMapPoint> points{{0.0, 0.0}, {800.0, 100.0}};

  double max_torque_nm() const { return points.back().torque_nm; }
};

inline void validate(const BrakeMap& map) {
  using detail::require;
  const auto& pts = map.points;
  require(pts.size() >= 2, "brake.map", "needs at least two points");
  require(pts.front().torque_nm == 0.0 && pts.front().percent == 0.0, "brake.map",
          "first point must be (0, 0)");
  require(pts.back().percent == 100.0, "brake.map", "last point must be at 100 percent");
  for (std::size_t i = 1; i < pts.size(); ++i) {
    require(std::isfinite(pts[i].torque_nm) && pts[i].torque_nm > pts[i - 1].torque_nm &&
                pts[i].percent > pts[i - 1].percent,
            "brake.map", "points must be strictly increasing in torque and percent");
  }
}

namespace detail {

template <auto From, auto To>
double interpolate(const std::vector<BrakeMapPoint>& pts, double x) {
  if (x <= pts.front().*From) return pts.front().*To;
  if (x >= pts.back().*From) return pts.back().*To;
  auto hi = std::upper_bound(pts.begin(), pts.end(), x,
                             [](double value, const BrakeMapPoint& p) { return value < p.*From; });
  const BrakeMapPoint& a = *std::prev(hi);
  const BrakeMapPoint& b = *hi;
  const double frac = (x - a.*From) / (b.*From - a.*From);
  return a.*To + frac * (b.*To - a.*To);
}

}  // namespace detail

/// Clamps to 100 % above the map's maximum torque.
inline double brake_pedal_from_torque(double torque_nm, const BrakeMap& map) {
  return detail::interpolate<&BrakeMapPoint::torque_nm, &BrakeMapPoint::percent>(map.points,
                                                                                 torque_nm);
}

inline double brake_torque_from_pedal(double pedal_percent, const BrakeMap& map) {
  return detail::interpolate<&BrakeMapPoint::percent, &BrakeMapPoint::torque_nm>(map.points,
                                                                                 pedal_percent);
}

}  // namespace lonctl
