#include "odokit/kinematics.hpp"

#include <cmath>
#include <string>

#include "odokit/errors.hpp"

namespace odokit {

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw ArgumentError(std::string(what) + " must be finite");
  }
}

}  // namespace

void VehicleGeometry::validate() const {
  if (!(wheel_radius > 0.0) || !std::isfinite(wheel_radius)) {
    throw ConfigError("wheel_radius must be a positive finite number");
  }
  if (!(track_width > 0.0) || !std::isfinite(track_width)) {
    throw ConfigError("track_width must be a positive finite number");
  }
  if (!(max_wheel_speed > 0.0)) {
    throw ConfigError("max_wheel_speed must be positive");
  }
}

double wrap_angle(double theta) {
  require_finite(theta, "angle");
  if (theta >= -kPi && theta < kPi) {
    return theta;
  }
  double r = std::fmod(theta + kPi, kTwoPi);
  if (r < 0.0) {
    r += kTwoPi;
  }
  double wrapped = r - kPi;
  // Rounding in the shift can land exactly on +pi.
  if (wrapped >= kPi) {
    wrapped -= kTwoPi;
  }
  return wrapped;
}

Twist2D forward_kinematics(const WheelAngularSpeeds& speeds, const VehicleGeometry& geom) {
  geom.validate();
  require_finite(speeds.left, "left wheel speed");
  require_finite(speeds.right, "right wheel speed");
  const double r = geom.wheel_radius;
  return {0.5 * r * (speeds.right + speeds.left),
          r / geom.track_width * (speeds.right - speeds.left)};
}

WheelAngularSpeeds inverse_kinematics(const Twist2D& twist, const VehicleGeometry& geom) {
  geom.validate();
  require_finite(twist.v, "linear speed");
  require_finite(twist.omega, "angular speed");
  const double half_track = 0.5 * geom.track_width;
  return {(twist.v - twist.omega * half_track) / geom.wheel_radius,
          (twist.v + twist.omega * half_track) / geom.wheel_radius};
}

Pose2D integrate_pose(const Pose2D& pose, const WheelDisplacements& disp,
                      const VehicleGeometry& geom, const IntegratorOptions& options) {
  geom.validate();
  require_finite(disp.left, "left displacement");
  require_finite(disp.right, "right displacement");
  require_finite(disp.center, "center displacement");

  const double dtheta = options.heading_gain * (disp.right - disp.left) / geom.track_width;
  const double heading =
      options.heading_mode == HeadingMode::kMidpoint ? pose.theta + 0.5 * dtheta : pose.theta;
  return {pose.x + disp.center * std::cos(heading), pose.y + disp.center * std::sin(heading),
          wrap_angle(pose.theta + dtheta)};
}

Pose2D exact_arc_step(const Pose2D& pose, const Twist2D& twist, double dt) {
  if (!(dt >= 0.0)) {
    throw ArgumentError("dt must be non-negative");
  }
  const double dtheta = twist.omega * dt;
  if (std::abs(dtheta) < kStraightArcThreshold) {
    const double dist = twist.v * dt;
    return {pose.x + dist * std::cos(pose.theta), pose.y + dist * std::sin(pose.theta),
            wrap_angle(pose.theta + dtheta)};
  }
  // Chord of the arc about the ICC: length 2 (v/omega) sin(dtheta/2), pointing
  // along the mid-arc heading.
  const double chord = 2.0 * twist.v / twist.omega * std::sin(0.5 * dtheta);
  const double chord_heading = pose.theta + 0.5 * dtheta;
  return {pose.x + chord * std::cos(chord_heading), pose.y + chord * std::sin(chord_heading),
          wrap_angle(pose.theta + dtheta)};
}

}  // namespace odokit
