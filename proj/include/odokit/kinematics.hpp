#pragma once

#include <numbers>

namespace odokit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double rpm_to_rad_s(double rpm) { return rpm * kTwoPi / 60.0; }
inline constexpr double rad_s_to_rpm(double rad_s) { return rad_s * 60.0 / kTwoPi; }

// Planar pose. theta is kept in [-pi, pi).
struct Pose2D {
  double x = 0.0;      // m
  double y = 0.0;      // m
  double theta = 0.0;  // rad

  bool operator==(const Pose2D&) const = default;
};

// Body-frame velocity of the vehicle.
struct Twist2D {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s

  bool operator==(const Twist2D&) const = default;
};

// Left/right wheel angular rates in rad/s.
struct WheelAngularSpeeds {
  double left = 0.0;
  double right = 0.0;

  bool operator==(const WheelAngularSpeeds&) const = default;
};

// Ground distance travelled by each wheel over one odometry interval.
struct WheelDisplacements {
  double left = 0.0;    // m
  double right = 0.0;   // m
  double center = 0.0;  // m, always (left + right) / 2

  static WheelDisplacements from_wheels(double left, double right) {
    return {left, right, 0.5 * (left + right)};
  }
};

struct VehicleGeometry {
  double wheel_radius = 0.15;  // m, 30 cm wheel
  double track_width = 0.56;   // m, distance between drive wheels
  // Hub motor limit, 106 rpm.
  double max_wheel_speed = rpm_to_rad_s(106.0);  // rad/s

  // Throws ConfigError on non-positive or non-finite values.
  void validate() const;
};

// Normalizes an angle to [-pi, pi). Angles already in range are returned
// unchanged, so the function is idempotent bit for bit.
double wrap_angle(double theta);

Twist2D forward_kinematics(const WheelAngularSpeeds& speeds, const VehicleGeometry& geom);
WheelAngularSpeeds inverse_kinematics(const Twist2D& twist, const VehicleGeometry& geom);

enum class HeadingMode {
  kStartOfStep,  // cos/sin evaluated at the pre-update heading
  kMidpoint,     // cos/sin evaluated at theta + dtheta / 2
};

struct IntegratorOptions {
  HeadingMode heading_mode = HeadingMode::kStartOfStep;
  // Multiplies the per-step heading change only; D_c is never scaled.
  double heading_gain = 1.0;
};

// First-order dead-reckoning update from one interval of wheel travel:
//   x' = x + D_c cos(theta), y' = y + D_c sin(theta),
//   theta' = wrap(theta + gain * (D_r - D_l) / L).
Pose2D integrate_pose(const Pose2D& pose, const WheelDisplacements& disp,
                      const VehicleGeometry& geom, const IntegratorOptions& options = {});

// Below this |omega * dt| the arc step uses the straight-line formula.
inline constexpr double kStraightArcThreshold = 1e-9;

// Closed-form pose after moving with a constant twist for dt seconds,
// i.e. rotation about the instantaneous centre of curvature.
Pose2D exact_arc_step(const Pose2D& pose, const Twist2D& twist, double dt);

}  // namespace odokit
