#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "lonctl/errors.hpp"

namespace lonctl {

struct FlatTerrain {};

/// Grade held constant from `start_m` until the next segment starts. The last
/// segment extends to infinity. The first segment must start at 0.
struct GradeSegment {
  double start_m = 0.0;
  double grade_rad = 0.0;
};

struct PiecewiseGrade {
  std::vector<GradeSegment> segments;
};

/// grade(d) = amplitude * sin(2*pi*d / wavelength)
struct SinusoidalGrade {
  double amplitude_rad = 0.05;
  double wavelength_m = 50.0;
};

/// Road pitch as a function of distance travelled. Positive grade is uphill.
using TerrainProfile = std::variant<FlatTerrain, PiecewiseGrade, SinusoidalGrade>;

inline double grade_at(const FlatTerrain&, double) { return 0.0; }

inline double grade_at(const PiecewiseGrade& terrain, double distance_m) {
  const auto& segs = terrain.segments;
  if (segs.empty()) return 0.0;
  auto it = std::upper_bound(segs.begin(), segs.end(), distance_m,
                             [](double d, const GradeSegment& s) { return d < s.start_m; });
  if (it == segs.begin()) return segs.front().grade_rad;
  return std::prev(it)->grade_rad;
}

inline double grade_at(const SinusoidalGrade& terrain, double distance_m) {
  return terrain.amplitude_rad *
         std::sin(2.0 * std::numbers::pi * distance_m / terrain.wavelength_m);
}

inline double grade_at(const TerrainProfile& terrain, double distance_m) {
  return std::visit([distance_m](const auto& t) { return grade_at(t, distance_m); }, terrain);
}

inline void validate(const TerrainProfile& terrain, const std::string& prefix = "scenario.terrain") {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  if (const auto* pw = std::get_if<PiecewiseGrade>(&terrain)) {
    detail::require(!pw->segments.empty(), prefix + ".segments", "must not be empty");
    detail::require(pw->segments.front().start_m == 0.0, prefix + ".segments",
                    "first segment must start at 0");
    for (std::size_t i = 0; i < pw->segments.size(); ++i) {
      const auto& s = pw->segments[i];
      detail::require(std::abs(s.grade_rad) < kHalfPi, prefix + ".segments",
                      "grade must satisfy |grade| < pi/2");
      if (i > 0) {
        detail::require(s.start_m > pw->segments[i - 1].start_m, prefix + ".segments",
                        "segment starts must be strictly increasing");
      }
    }
  } else if (const auto* sn = std::get_if<SinusoidalGrade>(&terrain)) {
    detail::require(std::abs(sn->amplitude_rad) < kHalfPi, prefix + ".amplitude_rad",
                    "must satisfy |amplitude| < pi/2");
    detail::require(sn->wavelength_m > 0.0, prefix + ".wavelength_m", "must be > 0");
  }
}

}  // namespace lonctl
