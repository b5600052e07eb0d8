#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace lonctl {

struct ProfileSample {
  double time_s = 0.0;
  double velocity_mps = 0.0;
};

/// Target velocity over time, linear between samples and held constant
/// outside them.
class ReferenceProfile {
 public:
  ReferenceProfile() = default;
  explicit ReferenceProfile(std::vector<ProfileSample> samples, double duration_s)
      : samples_(std::move(samples)), duration_s_(duration_s) {
    if (samples_.empty()) throw std::invalid_argument("reference profile needs samples");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      if (samples_[i].velocity_mps < 0.0) {
        throw std::invalid_argument("reference velocities must be >= 0");
      }
      if (i > 0 && !(samples_[i].time_s > samples_[i - 1].time_s)) {
        throw std::invalid_argument("reference sample times must be strictly increasing");
      }
    }
  }

  double at(double time_s) const {
    if (samples_.empty()) return 0.0;
    if (time_s <= samples_.front().time_s) return samples_.front().velocity_mps;
    if (time_s >= samples_.back().time_s) return samples_.back().velocity_mps;
    auto hi = std::upper_bound(samples_.begin(), samples_.end(), time_s,
                               [](double t, const ProfileSample& s) { return t < s.time_s; });
    auto lo = std::prev(hi);
    const double frac = (time_s - lo->time_s) / (hi->time_s - lo->time_s);
    return lo->velocity_mps + frac * (hi->velocity_mps - lo->velocity_mps);
  }

  double duration_s() const { return duration_s_; }
  const std::vector<ProfileSample>& samples() const { return samples_; }

 private:
  std::vector<ProfileSample> samples_{{0.0, 0.0}};
  double duration_s_ = 0.0;
};

/// Step to `v_target` at t = 0. `window_s` is the planner deadline and does
/// not shape the profile itself.
inline ReferenceProfile make_set_point_profile(double v_target, [[maybe_unused]] double window_s,
                                               double total_s) {
  if (v_target < 0.0) throw std::invalid_argument("set-point target must be >= 0");
  return ReferenceProfile({{0.0, v_target}}, total_s);
}

inline ReferenceProfile make_rising_profile(double v_final, double rise_duration_s,
                                            double total_s) {
  if (!(rise_duration_s > 0.0)) throw std::invalid_argument("rise duration must be > 0");
  return ReferenceProfile({{0.0, 0.0}, {rise_duration_s, v_final}}, total_s);
}

/// Up to `v_peak`, hold, down to 0, hold, back up to `v_peak`; every phase
/// lasts `phase_s`.
inline ReferenceProfile make_stop_and_go_profile(double v_peak, double phase_s, double total_s) {
  if (v_peak < 0.0) throw std::invalid_argument("stop-and-go peak must be >= 0");
  if (!(phase_s > 0.0)) throw std::invalid_argument("stop-and-go phase must be > 0");
  return ReferenceProfile({{0.0, 0.0},
                           {phase_s, v_peak},
                           {2.0 * phase_s, v_peak},
                           {3.0 * phase_s, 0.0},
                           {4.0 * phase_s, 0.0},
                           {5.0 * phase_s, v_peak}},
                          total_s);
}

}  // namespace lonctl
