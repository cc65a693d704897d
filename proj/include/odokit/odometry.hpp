#pragma once

#include <span>

#include "odokit/calibration.hpp"
#include "odokit/encoder.hpp"
#include "odokit/kinematics.hpp"
#include "odokit/trajectory.hpp"

namespace odokit {

struct OdometrySettings {
  VehicleGeometry geometry;
  EncoderConfig encoder;
  SpeedFilterConfig filter;
  HeadingMode heading_mode = HeadingMode::kStartOfStep;
};

// Scales one interval's wheel travel by the profile's rpm and balance
// correction of its mean rate. The identity profile leaves it bit-exact.
WheelDisplacements calibrated_displacements(const OdometryInterval& interval,
                                            const VehicleGeometry& geom,
                                            const CalibrationProfile& profile);

// Full dead-reckoning pipeline over an encoder log:
// counts -> rpm correction -> balance -> pose update with heading gain.
// The result has one pose per log row, the first being `start` at the first
// row's timestamp.
Trajectory estimate_trajectory(std::span<const EncoderSample> log, const OdometrySettings& settings,
                               const CalibrationProfile& profile, const Pose2D& start = {});

}  // namespace odokit
