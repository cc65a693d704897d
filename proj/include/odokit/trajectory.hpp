#pragma once

#include <vector>

#include "odokit/kinematics.hpp"

namespace odokit {

struct TimedPose {
  double t = 0.0;  // s
  Pose2D pose;

  bool operator==(const TimedPose&) const = default;
};

// Time-ordered poses; t strictly increasing.
struct Trajectory {
  std::vector<TimedPose> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  const TimedPose& front() const { return samples.front(); }
  const TimedPose& back() const { return samples.back(); }
  bool operator==(const Trajectory&) const = default;
};

}  // namespace odokit
