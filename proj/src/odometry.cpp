#include "odokit/odometry.hpp"

#include "odokit/errors.hpp"

namespace odokit {

namespace {

double corrected_angle(double angle, double dt, double corrected_rate) {
  const double raw_rate = angle / dt;
  if (raw_rate == 0.0) {
    return 0.0;
  }
  return angle * (corrected_rate / raw_rate);
}

}  // namespace

WheelDisplacements calibrated_displacements(const OdometryInterval& interval,
                                            const VehicleGeometry& geom,
                                            const CalibrationProfile& profile) {
  const double left = corrected_angle(interval.left_angle, interval.dt,
                                      correct_left_speed(profile, interval.raw_speeds.left));
  const double right = corrected_angle(interval.right_angle, interval.dt,
                                       correct_right_speed(profile, interval.raw_speeds.right));
  return WheelDisplacements::from_wheels(geom.wheel_radius * left, geom.wheel_radius * right);
}

Trajectory estimate_trajectory(std::span<const EncoderSample> log, const OdometrySettings& settings,
                               const CalibrationProfile& profile, const Pose2D& start) {
  settings.geometry.validate();
  profile.validate();
  if (log.empty()) {
    throw StreamError(0, "encoder log is empty");
  }
  Pose2D pose{start.x, start.y, wrap_angle(start.theta)};
  Trajectory traj;
  traj.samples.reserve(log.size());
  traj.samples.push_back({static_cast<double>(log.front().t_ms) * 1e-3, pose});
  if (log.size() == 1) {
    return traj;
  }

  const IntegratorOptions integrator{settings.heading_mode, profile.heading.gain};
  for (const OdometryInterval& iv : samples_to_speeds(log, settings.encoder, settings.filter)) {
    pose = integrate_pose(pose, calibrated_displacements(iv, settings.geometry, profile),
                          settings.geometry, integrator);
    traj.samples.push_back({iv.t, pose});
  }
  return traj;
}

}  // namespace odokit
