#include "odokit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "odokit/errors.hpp"

namespace odokit {

namespace {

// Tolerance used when checking that one period is a whole multiple of another.
constexpr double kMultipleTolerance = 1e-9;

std::int64_t whole_periods(double duration, double period) {
  return static_cast<std::int64_t>(std::ceil(duration / period - kMultipleTolerance));
}

void check_wheel_limit(const WheelAngularSpeeds& speeds, const VehicleGeometry& geom,
                       const std::string& what) {
  const double peak = std::max(std::abs(speeds.left), std::abs(speeds.right));
  if (peak > geom.max_wheel_speed) {
    throw PlanError(what + " needs a wheel speed of " + std::to_string(peak) +
                    " rad/s, above the limit of " + std::to_string(geom.max_wheel_speed) +
                    " rad/s");
  }
}

}  // namespace

void NoiseModel::validate() const {
  if (!(left_scale_error > 0.0) || !(right_scale_error > 0.0) ||
      !std::isfinite(left_scale_error) || !std::isfinite(right_scale_error)) {
    throw ConfigError("noise scale errors must be positive");
  }
  if (!(slip_noise_std >= 0.0) || !std::isfinite(slip_noise_std)) {
    throw ConfigError("noise slip_noise_std must be non-negative");
  }
}

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("sim dt must be positive");
  }
  if (!(sample_period > 0.0) || !std::isfinite(sample_period)) {
    throw ConfigError("sim sample_period must be positive");
  }
  const double ratio = sample_period / dt;
  if (ratio < 1.0 - kMultipleTolerance ||
      std::abs(ratio - std::round(ratio)) > kMultipleTolerance * ratio) {
    throw ConfigError("sim sample_period (" + std::to_string(sample_period) +
                      " s) is not an integer multiple of dt (" + std::to_string(dt) + " s)");
  }
  if (std::abs(sample_period * 1000.0 - std::round(sample_period * 1000.0)) > 1e-6) {
    throw ConfigError("sim sample_period must be a whole number of milliseconds");
  }
  if (encoder.sample_period != sample_period) {
    throw ConfigError("encoder sample_period differs from sim sample_period");
  }
  geometry.validate();
  encoder.validate();
  noise.validate();
  filter.validate();
}

std::int64_t SimConfig::steps_per_sample() const {
  return static_cast<std::int64_t>(std::llround(sample_period / dt));
}

OdometrySettings SimConfig::odometry_settings() const {
  return {geometry, encoder, filter, heading_mode};
}

void WaypointPlan::validate() const {
  if (waypoints.size() < 2) {
    throw PlanError("a plan needs at least two waypoints");
  }
  if (!(cruise_speed > 0.0) || !(turn_rate > 0.0)) {
    throw PlanError("cruise_speed and turn_rate must be positive");
  }
  if (align_period < 0.0) {
    throw PlanError("align_period must be non-negative");
  }
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (waypoints[i] == waypoints[i - 1]) {
      throw PlanError("waypoint " + std::to_string(i) + " repeats the previous one");
    }
  }
}

Pose2D step_truth(const Pose2D& state, const WheelAngularSpeeds& speeds,
                  const VehicleGeometry& geom, double dt) {
  if (!(dt > 0.0)) {
    throw ArgumentError("dt must be positive");
  }
  return exact_arc_step(state, forward_kinematics(speeds, geom), dt);
}

void accumulate_slip(SensorState& state, const NoiseModel& noise, double dt) {
  if (noise.slip_noise_std == 0.0) {
    return;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = noise.slip_noise_std * std::sqrt(dt);
  state.slip.left += scale * gauss(state.rng);
  state.slip.right += scale * gauss(state.rng);
}

EncoderSample sense(std::int64_t t_ms, const WheelAngles& true_angles, const NoiseModel& noise,
                    const EncoderConfig& encoder, const SensorState& state) {
  const double counts_per_rad = encoder.counts_per_wheel_rev() / kTwoPi;
  const auto to_counts = [&](double angle) {
    return static_cast<std::int64_t>(std::floor(angle * counts_per_rad));
  };
  return {t_ms, to_counts(true_angles.left * noise.left_scale_error + state.slip.left),
          to_counts(true_angles.right * noise.right_scale_error + state.slip.right)};
}

PlannedSchedule plan_schedule(const WaypointPlan& plan, const VehicleGeometry& geom) {
  plan.validate();
  geom.validate();

  PlannedSchedule planned;
  Schedule& schedule = planned.schedule;
  double elapsed = 0.0;
  const auto add_turn = [&](double angle) {
    if (angle == 0.0) {
      return;
    }
    double duration = std::abs(angle) / plan.turn_rate;
    if (plan.align_period > 0.0) {
      duration = static_cast<double>(whole_periods(duration, plan.align_period)) * plan.align_period;
    }
    const WheelAngularSpeeds speeds = inverse_kinematics({0.0, angle / duration}, geom);
    check_wheel_limit(speeds, geom, "turn");
    schedule.push_back({duration, speeds});
    elapsed += duration;
  };
  const auto add_leg = [&](double length) {
    double duration = length / plan.cruise_speed;
    if (plan.align_period > 0.0) {
      duration = static_cast<double>(whole_periods(duration, plan.align_period)) * plan.align_period;
    }
    const WheelAngularSpeeds speeds = inverse_kinematics({length / duration, 0.0}, geom);
    check_wheel_limit(speeds, geom, "straight leg");
    schedule.push_back({duration, speeds});
    elapsed += duration;
  };

  double heading = 0.0;
  planned.waypoint_times.push_back(0.0);
  for (std::size_t i = 1; i < plan.waypoints.size(); ++i) {
    const Point2D& from = plan.waypoints[i - 1];
    const Point2D& to = plan.waypoints[i];
    const double leg_heading = std::atan2(to.y - from.y, to.x - from.x);
    add_turn(wrap_angle(leg_heading - heading));
    add_leg(std::hypot(to.x - from.x, to.y - from.y));
    heading = leg_heading;
    planned.waypoint_times.push_back(elapsed);
  }
  if (plan.final_heading) {
    add_turn(wrap_angle(*plan.final_heading - heading));
  }
  return planned;
}

Schedule follow_waypoints(const WaypointPlan& plan, const VehicleGeometry& geom) {
  return plan_schedule(plan, geom).schedule;
}

WaypointPlan square_plan(double side, const SquareOptions& options) {
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw PlanError("square side must be positive");
  }
  WaypointPlan plan;
  plan.waypoints = {{0.0, 0.0}, {side, 0.0}, {side, side}, {0.0, side}, {0.0, 0.0}};
  plan.cruise_speed = options.cruise_speed;
  plan.turn_rate = options.turn_rate;
  plan.align_period = options.align_period;
  if (options.final_turn) {
    plan.final_heading = 0.0;
  }
  return plan;
}

Schedule follow_square(double side, const SquareOptions& options, const VehicleGeometry& geom) {
  return follow_waypoints(square_plan(side, options), geom);
}

namespace {

// Closed-form state at the start of each schedule entry, so the truth at any
// time is one exact arc step from the enclosing entry's start.
struct SegmentStart {
  double t = 0.0;
  Pose2D pose;
  WheelAngles angles;
};

class TruthModel {
 public:
  TruthModel(const Schedule& schedule, const VehicleGeometry& geom)
      : schedule_(schedule), geom_(geom) {
    SegmentStart start;
    for (const ScheduleEntry& entry : schedule_) {
      if (!(entry.duration > 0.0)) {
        throw PlanError("schedule entry durations must be positive");
      }
      starts_.push_back(start);
      start.pose = step_truth(start.pose, entry.speeds, geom_, entry.duration);
      start.angles.left += entry.speeds.left * entry.duration;
      start.angles.right += entry.speeds.right * entry.duration;
      start.t += entry.duration;
    }
    end_ = start;
  }

  double duration() const { return end_.t; }

  // Pose and wheel angles at time t (held constant after the schedule ends).
  SegmentStart at(double t) const {
    if (t >= end_.t || starts_.empty()) {
      SegmentStart s = end_;
      s.t = t;
      return s;
    }
    auto it = std::upper_bound(starts_.begin(), starts_.end(), t,
                               [](double v, const SegmentStart& s) { return v < s.t; });
    const std::size_t idx = static_cast<std::size_t>(it - starts_.begin()) - 1;
    const SegmentStart& s = starts_[idx];
    const double elapsed = t - s.t;
    if (elapsed == 0.0) {
      return s;
    }
    const WheelAngularSpeeds& w = schedule_[idx].speeds;
    return {t, step_truth(s.pose, w, geom_, elapsed),
            {s.angles.left + w.left * elapsed, s.angles.right + w.right * elapsed}};
  }

 private:
  const Schedule& schedule_;
  VehicleGeometry geom_;
  std::vector<SegmentStart> starts_;
  SegmentStart end_;
};

}  // namespace

ExperimentResult run_experiment(const SimConfig& cfg, const Schedule& schedule,
                                const CalibrationProfile& profile) {
  cfg.validate();
  profile.validate();
  const TruthModel truth_model(schedule, cfg.geometry);

  const std::int64_t steps_per_sample = cfg.steps_per_sample();
  const std::int64_t n_samples = std::max<std::int64_t>(
      whole_periods(truth_model.duration(), cfg.sample_period), 0);
  const std::int64_t period_ms = std::llround(cfg.sample_period * 1000.0);

  ExperimentResult result;
  SensorState sensor(cfg.noise.seed);
  for (std::int64_t k = 0; k <= n_samples; ++k) {
    if (k > 0) {
      for (std::int64_t s = 0; s < steps_per_sample; ++s) {
        accumulate_slip(sensor, cfg.noise, cfg.dt);
      }
    }
    const double t = static_cast<double>(k) * cfg.sample_period;
    const SegmentStart state = truth_model.at(t);
    result.truth.samples.push_back({t, state.pose});
    result.log.push_back(sense(k * period_ms, state.angles, cfg.noise, cfg.encoder, sensor));
  }
  result.estimate = estimate_trajectory(result.log, cfg.odometry_settings(), profile);
  return result;
}

ExperimentResult run_experiment(const SimConfig& cfg, const WaypointPlan& plan,
                                const CalibrationProfile& profile) {
  PlannedSchedule planned = plan_schedule(plan, cfg.geometry);
  ExperimentResult result = run_experiment(cfg, planned.schedule, profile);
  result.waypoint_times = std::move(planned.waypoint_times);
  return result;
}

std::vector<TachometerReading> simulate_tachometer_session(const SimConfig& cfg,
                                                           std::span<const double> true_rpms,
                                                           double duration) {
  cfg.validate();
  if (!(duration > 0.0)) {
    throw ArgumentError("tachometer session duration must be positive");
  }
  const std::int64_t steps = std::max<std::int64_t>(1, std::llround(duration / cfg.dt));
  const std::int64_t duration_ms = std::llround(duration * 1000.0);
  SensorState sensor(cfg.noise.seed);
  std::vector<TachometerReading> readings;
  for (double rpm : true_rpms) {
    sensor.slip = {};
    const double angle = rpm_to_rad_s(rpm) * duration;
    const EncoderSample start = sense(0, {}, cfg.noise, cfg.encoder, sensor);
    for (std::int64_t s = 0; s < steps; ++s) {
      accumulate_slip(sensor, cfg.noise, cfg.dt);
    }
    const EncoderSample end = sense(duration_ms, {angle, angle}, cfg.noise, cfg.encoder, sensor);
    readings.push_back({rpm, counts_to_rpm(end.left_count - start.left_count, duration, cfg.encoder),
                        counts_to_rpm(end.right_count - start.right_count, duration, cfg.encoder)});
  }
  return readings;
}

}  // namespace odokit
