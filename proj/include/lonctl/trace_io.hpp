#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "lonctl/metrics.hpp"
#include "lonctl/simulation.hpp"

namespace lonctl {

inline constexpr std::string_view kTraceHeader =
    "time_s,ref_velocity_mps,velocity_mps,ep_v,brake_percent,grade_rad,mode,wheel_torque_nm,"
    "brake_torque_nm";
inline constexpr std::string_view kSummaryHeader =
    "scenario,terrain,controller,rise_time_s,rmse_kmh,sse_kmh";

// Nine significant digits keeps diffs stable while round-tripping well below
// any metric tolerance.
inline std::string format_value(double v) { return fmt::format("{:.9g}", v); }

inline void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.rows) {
    out << fmt::format("{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{},{:.9g},{:.9g}\n", r.time_s,
                       r.ref_velocity_mps, r.velocity_mps, r.ep_v, r.brake_percent, r.grade_rad,
                       to_string(r.mode), r.wheel_torque_nm, r.brake_torque_nm);
  }
}

inline void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace '" + path.string() + "'");
  write_trace_csv(out, trace);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline Mode parse_mode(const std::string& s) {
  if (s == "drive") return Mode::Drive;
  if (s == "brake") return Mode::Brake;
  if (s == "coast") return Mode::Coast;
  throw std::runtime_error("unknown mode '" + s + "'");
}

}  // namespace detail

/// Reads a trace written by write_trace_csv. dt is taken from the first two rows.
inline RunTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error("trace CSV: unexpected header");
  }
  RunTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 9) throw std::runtime_error("trace CSV: expected 9 fields");
    trace.rows.push_back({std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3]),
                          std::stod(f[4]), std::stod(f[5]), detail::parse_mode(f[6]),
                          std::stod(f[7]), std::stod(f[8])});
  }
  if (trace.rows.size() >= 2) trace.dt_s = trace.rows[1].time_s - trace.rows[0].time_s;
  return trace;
}

inline RunTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read trace '" + path.string() + "'");
  return read_trace_csv(in);
}

inline std::string summary_row(const MetricsReport& m) {
  return fmt::format("{},{},{},{},{:.9g},{:.9g}", m.scenario, m.terrain, m.controller,
                     m.rise_time_s ? format_value(*m.rise_time_s) : std::string("undefined"),
                     m.rmse_kmh, m.steady_state_error_kmh);
}

inline void write_summary_csv(std::ostream& out, const std::vector<MetricsReport>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) out << summary_row(r) << '\n';
}

inline void write_summary_csv(const std::filesystem::path& path,
                              const std::vector<MetricsReport>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write summary '" + path.string() + "'");
  write_summary_csv(out, rows);
}

inline std::vector<MetricsReport> read_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader) {
    throw std::runtime_error("summary CSV: unexpected header");
  }
  std::vector<MetricsReport> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 6) throw std::runtime_error("summary CSV: expected 6 fields");
    MetricsReport m{f[0], f[1], f[2], std::nullopt, std::stod(f[4]), std::stod(f[5])};
    if (f[3] != "undefined") m.rise_time_s = std::stod(f[3]);
    rows.push_back(std::move(m));
  }
  return rows;
}

}  // namespace lonctl
