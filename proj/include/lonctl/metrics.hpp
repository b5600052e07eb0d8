#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "lonctl/simulation.hpp"

namespace lonctl {

inline constexpr double kMpsToKmh = 3.6;

struct MetricsReport {
  std::string scenario;
  std::string terrain;
  std::string controller;
  std::optional<double> rise_time_s;  // empty when the response never reaches 90 %
  double rmse_kmh = 0.0;
  double steady_state_error_kmh = 0.0;
};

namespace detail {

/// Time at which velocity first reaches `threshold`, interpolated between rows.
inline std::optional<double> first_crossing(std::span<const TraceRow> rows, double threshold) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].velocity_mps < threshold) continue;
    if (k == 0) return rows[0].time_s;
    const TraceRow& a = rows[k - 1];
    const TraceRow& b = rows[k];
    const double frac = (threshold - a.velocity_mps) / (b.velocity_mps - a.velocity_mps);
    return a.time_s + frac * (b.time_s - a.time_s);
  }
  return std::nullopt;
}

}  // namespace detail

/// 10 % to 90 % rise time against `final_value_mps`.
inline std::optional<double> rise_time(std::span<const TraceRow> rows, double final_value_mps) {
  if (!(final_value_mps > 0.0)) throw std::invalid_argument("rise_time: final value must be > 0");
  const auto t10 = detail::first_crossing(rows, 0.1 * final_value_mps);
  const auto t90 = detail::first_crossing(rows, 0.9 * final_value_mps);
  if (!t10 || !t90) return std::nullopt;
  return *t90 - *t10;
}

inline std::optional<double> rise_time(const RunTrace& trace, double final_value_mps) {
  return rise_time(std::span<const TraceRow>(trace.rows), final_value_mps);
}

/// Root-mean-square tracking error over every row, in km/h.
inline double rmse(std::span<const TraceRow> rows) {
  if (rows.empty()) throw std::invalid_argument("rmse: empty trace");
  double sum = 0.0;
  for (const auto& r : rows) {
    const double e = r.ref_velocity_mps - r.velocity_mps;
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(rows.size())) * kMpsToKmh;
}

inline double rmse(const RunTrace& trace) { return rmse(std::span<const TraceRow>(trace.rows)); }

/// Mean absolute tracking error over the trailing `window_fraction` of the
/// rows, in km/h.
inline double steady_state_error(std::span<const TraceRow> rows, double window_fraction = 0.2) {
  if (rows.empty()) throw std::invalid_argument("steady_state_error: empty trace");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw std::invalid_argument("steady_state_error: window fraction must be in (0, 1]");
  }
  const auto n = rows.size();
  auto count = static_cast<std::size_t>(std::ceil(window_fraction * n - 1e-9));
  count = std::clamp<std::size_t>(count, 1, n);
  double sum = 0.0;
  for (const auto& r : rows.subspan(n - count)) sum += std::abs(r.ref_velocity_mps - r.velocity_mps);
  return sum / static_cast<double>(count) * kMpsToKmh;
}

inline double steady_state_error(const RunTrace& trace, double window_fraction = 0.2) {
  return steady_state_error(std::span<const TraceRow>(trace.rows), window_fraction);
}

/// Rise time is measured against `set_point_mps`; pass 0 to skip it (e.g.
/// for profiles without a step).
inline MetricsReport evaluate(const RunTrace& trace, double set_point_mps,
                              double window_fraction = 0.2) {
  MetricsReport report;
  if (set_point_mps > 0.0) report.rise_time_s = rise_time(trace, set_point_mps);
  report.rmse_kmh = rmse(trace);
  report.steady_state_error_kmh = steady_state_error(trace, window_fraction);
  return report;
}

}  // namespace lonctl
