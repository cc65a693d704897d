#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "odokit/calibration.hpp"
#include "odokit/encoder.hpp"
#include "odokit/kinematics.hpp"
#include "odokit/odometry.hpp"
#include "odokit/trajectory.hpp"

namespace odokit {

// Sensor imperfections injected between the true wheel motion and the
// counted ticks.
struct NoiseModel {
  double left_scale_error = 1.0;   // multiplies the true left wheel angle
  double right_scale_error = 1.0;
  double slip_noise_std = 0.0;     // rad/s, white noise on the counted wheel rate
  std::uint64_t seed = 0;

  void validate() const;
};

struct SimConfig {
  double dt = 0.01;            // s, physics/noise step
  double sample_period = 1.0;  // s, encoder log period; an integer multiple of dt
  VehicleGeometry geometry;
  EncoderConfig encoder;       // encoder.sample_period is kept equal to sample_period
  NoiseModel noise;
  SpeedFilterConfig filter;
  HeadingMode heading_mode = HeadingMode::kStartOfStep;

  // Throws ConfigError.
  void validate() const;
  std::int64_t steps_per_sample() const;
  OdometrySettings odometry_settings() const;
};

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2D&) const = default;
};

struct WaypointPlan {
  std::vector<Point2D> waypoints;
  double cruise_speed = 0.3;  // m/s
  double turn_rate = 0.5;     // rad/s, upper bound when durations are aligned
  // Heading to turn to after the last leg, if any.
  std::optional<double> final_heading;
  // When positive, every segment duration is rounded up to a multiple of
  // this period and its speed lowered to keep distance and angle exact.
  double align_period = 0.0;

  void validate() const;  // throws PlanError
};

// Constant wheel speeds held for a duration.
struct ScheduleEntry {
  double duration = 0.0;  // s
  WheelAngularSpeeds speeds;
};

using Schedule = std::vector<ScheduleEntry>;

// Ground-truth motion: closed-form arc about the ICC.
Pose2D step_truth(const Pose2D& state, const WheelAngularSpeeds& speeds,
                  const VehicleGeometry& geom, double dt);

struct WheelAngles {
  double left = 0.0;   // rad
  double right = 0.0;
};

// Integrated slip noise and the RNG that drives it, one per run.
struct SensorState {
  explicit SensorState(std::uint64_t seed) : rng(seed) {}

  WheelAngles slip;
  std::mt19937_64 rng;
};

// Adds one physics step of white slip noise, scaled by sqrt(dt).
void accumulate_slip(SensorState& state, const NoiseModel& noise, double dt);

// Cumulative tick counts for the given true wheel angles: the scaled angle
// plus the integrated slip, floored to whole counts.
EncoderSample sense(std::int64_t t_ms, const WheelAngles& true_angles, const NoiseModel& noise,
                    const EncoderConfig& encoder, const SensorState& state);

struct PlannedSchedule {
  Schedule schedule;
  std::vector<double> waypoint_times;  // s, arrival at each waypoint
};

PlannedSchedule plan_schedule(const WaypointPlan& plan, const VehicleGeometry& geom);

// Open-loop schedule for a waypoint plan starting at the first waypoint with
// heading 0: spin in place toward each leg, then drive it straight.
// Throws PlanError if any wheel speed exceeds the geometry's limit.
Schedule follow_waypoints(const WaypointPlan& plan, const VehicleGeometry& geom);

struct SquareOptions {
  double cruise_speed = 0.3;
  double turn_rate = 0.5;
  bool final_turn = true;
  double align_period = 0.0;
};

// Counter-clockwise square of the given side from the origin:
// (0,0) -> (side,0) -> (side,side) -> (0,side) -> (0,0).
WaypointPlan square_plan(double side, const SquareOptions& options = {});
Schedule follow_square(double side, const SquareOptions& options, const VehicleGeometry& geom);

struct ExperimentResult {
  Trajectory truth;
  std::vector<EncoderSample> log;
  Trajectory estimate;
  std::vector<double> waypoint_times;  // filled when run from a WaypointPlan
};

// Simulates the schedule from the origin, samples the encoders every
// sample_period until the schedule has finished, and runs the odometry
// pipeline on the resulting log. All three outputs share timestamps.
ExperimentResult run_experiment(const SimConfig& cfg, const Schedule& schedule,
                                const CalibrationProfile& profile);
ExperimentResult run_experiment(const SimConfig& cfg, const WaypointPlan& plan,
                                const CalibrationProfile& profile);

// Drives both wheels at each true rpm for `duration` seconds and reports
// what the (noisy) encoders measured, as a tachometer comparison would.
std::vector<TachometerReading> simulate_tachometer_session(const SimConfig& cfg,
                                                           std::span<const double> true_rpms,
                                                           double duration);

}  // namespace odokit
