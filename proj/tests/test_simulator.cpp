#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "odokit/errors.hpp"
#include "odokit/evaluation.hpp"
#include "odokit/simulator.hpp"

namespace odokit {
namespace {

SimConfig quiet() {
  SimConfig cfg;
  cfg.filter.kind = FilterKind::kNone;
  return cfg;
}

TEST(SimConfig, Validation) {
  SimConfig ok = quiet();
  EXPECT_NO_THROW(ok.validate());
  EXPECT_EQ(ok.steps_per_sample(), 100);

  SimConfig bad = quiet();
  bad.dt = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);

  SimConfig uneven = quiet();
  uneven.dt = 0.03;
  EXPECT_THROW(uneven.validate(), ConfigError);

  SimConfig mismatched = quiet();
  mismatched.encoder.sample_period = 0.5;
  EXPECT_THROW(mismatched.validate(), ConfigError);
}

TEST(StepTruth, MatchesArcGeometry) {
  const VehicleGeometry g;
  // Straight: both wheels at w for t seconds covers R*w*t.
  const Pose2D s = step_truth({}, {2.0, 2.0}, g, 3.0);
  EXPECT_NEAR(s.x, 0.15 * 2.0 * 3.0, 1e-12);
  EXPECT_EQ(s.y, 0.0);
  // Spin: heading R/L*(wr-wl)*t.
  const Pose2D r = step_truth({}, {-1.0, 1.0}, g, 1.0);
  EXPECT_EQ(r.x, 0.0);
  EXPECT_NEAR(r.theta, 0.15 / 0.56 * 2.0, 1e-12);
}

TEST(Sense, FloorsScaledAngles) {
  const EncoderConfig enc;
  NoiseModel noise;
  noise.left_scale_error = 1.5;
  SensorState state(0);
  const EncoderSample s = sense(1000, {kTwoPi, -kTwoPi / 12000.0 * 0.5}, noise, enc, state);
  EXPECT_EQ(s.t_ms, 1000);
  EXPECT_EQ(s.left_count, 18000);
  EXPECT_EQ(s.right_count, -1);
}

TEST(Slip, DeterministicPerSeed) {
  NoiseModel noise;
  noise.slip_noise_std = 0.1;
  SensorState a(5), b(5), c(6);
  for (int i = 0; i < 100; ++i) {
    accumulate_slip(a, noise, 0.01);
    accumulate_slip(b, noise, 0.01);
    accumulate_slip(c, noise, 0.01);
  }
  EXPECT_EQ(a.slip.left, b.slip.left);
  EXPECT_EQ(a.slip.right, b.slip.right);
  EXPECT_NE(a.slip.left, c.slip.left);
}

TEST(SquarePlan, Geometry) {
  const WaypointPlan p = square_plan(6.0);
  const std::vector<Point2D> expect = {{0, 0}, {6, 0}, {6, 6}, {0, 6}, {0, 0}};
  EXPECT_EQ(p.waypoints, expect);
  EXPECT_THROW(square_plan(0.0), PlanError);
  EXPECT_THROW(square_plan(-1.0), PlanError);
}

TEST(PlanSchedule, DurationsAndTimes) {
  const VehicleGeometry g;
  const PlannedSchedule ps = plan_schedule(square_plan(6.0), g);
  // Four 20 s legs; the first leg needs no turn.
  double total = 0.0;
  for (const auto& e : ps.schedule) total += e.duration;
  EXPECT_NEAR(total, 4 * 20.0 + 4 * (kPi / 2) / 0.5, 1e-9);
  ASSERT_EQ(ps.waypoint_times.size(), 5u);
  EXPECT_EQ(ps.waypoint_times.front(), 0.0);
  EXPECT_NEAR(ps.waypoint_times[1], 20.0, 1e-12);
}

TEST(PlanSchedule, AlignedDurationsAreWholePeriods) {
  SquareOptions opts;
  opts.align_period = 1.0;
  const PlannedSchedule ps = plan_schedule(square_plan(6.0, opts), VehicleGeometry{});
  for (const auto& e : ps.schedule) {
    EXPECT_NEAR(e.duration, std::round(e.duration), 1e-12);
  }
  for (double t : ps.waypoint_times) EXPECT_NEAR(t, std::round(t), 1e-9);
}

TEST(PlanSchedule, RejectsSpeedAboveWheelLimit) {
  SquareOptions opts;
  opts.cruise_speed = 5.0;
  EXPECT_THROW(follow_square(6.0, opts, VehicleGeometry{}), PlanError);
}

TEST(RunExperiment, NoiselessTruthMatchesClosedFormSquare) {
  SimConfig cfg = quiet();
  SquareOptions opts;
  opts.align_period = cfg.sample_period;
  const ExperimentResult r = run_experiment(cfg, square_plan(6.0, opts), CalibrationProfile{});
  ASSERT_EQ(r.waypoint_times.size(), 5u);
  const std::vector<Point2D> corners = {{0, 0}, {6, 0}, {6, 6}, {0, 6}, {0, 0}};
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const Pose2D p = pose_at(r.truth, r.waypoint_times[i]);
    EXPECT_NEAR(p.x, corners[i].x, 1e-12) << i;
    EXPECT_NEAR(p.y, corners[i].y, 1e-12) << i;
  }
  EXPECT_NEAR(r.truth.back().pose.theta, 0.0, 1e-12);
}

TEST(RunExperiment, SharedTimestamps) {
  const ExperimentResult r = run_experiment(quiet(), square_plan(2.0), CalibrationProfile{});
  ASSERT_EQ(r.truth.size(), r.estimate.size());
  ASSERT_EQ(r.truth.size(), r.log.size());
  for (std::size_t i = 0; i < r.log.size(); ++i) {
    EXPECT_EQ(r.truth.samples[i].t, r.estimate.samples[i].t);
    EXPECT_EQ(r.log[i].t_ms, static_cast<std::int64_t>(i) * 1000);
  }
}

TEST(RunExperiment, QuantizationBoundOnStraightRun) {
  // One straight segment: the estimate can only lag the truth by less than a
  // count of arc per wheel.
  const SimConfig cfg = quiet();
  const Schedule straight = {{10.0, {1.7, 1.7}}};
  const ExperimentResult r = run_experiment(cfg, straight, CalibrationProfile{});
  const double arc = 0.15 * kTwoPi / 12000.0;
  for (std::size_t i = 0; i < r.truth.size(); ++i) {
    EXPECT_LT(std::abs(r.truth.samples[i].pose.x - r.estimate.samples[i].pose.x), arc);
  }
}

TEST(RunExperiment, SameSeedSameLog) {
  SimConfig cfg = quiet();
  cfg.noise.slip_noise_std = 0.01;
  cfg.noise.seed = 99;
  const auto a = run_experiment(cfg, square_plan(3.0), CalibrationProfile{});
  const auto b = run_experiment(cfg, square_plan(3.0), CalibrationProfile{});
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    EXPECT_EQ(a.log[i].left_count, b.log[i].left_count);
    EXPECT_EQ(a.log[i].right_count, b.log[i].right_count);
  }
  EXPECT_EQ(a.estimate, b.estimate);
  cfg.noise.seed = 100;
  const auto c = run_experiment(cfg, square_plan(3.0), CalibrationProfile{});
  EXPECT_NE(a.estimate, c.estimate);
}

TEST(RunExperiment, DtDoesNotMoveNoiselessTruth) {
  SimConfig coarse = quiet();
  SimConfig fine = quiet();
  fine.dt = 0.001;
  const auto a = run_experiment(coarse, square_plan(6.0), CalibrationProfile{});
  const auto b = run_experiment(fine, square_plan(6.0), CalibrationProfile{});
  ASSERT_EQ(a.truth.size(), b.truth.size());
  for (std::size_t i = 0; i < a.truth.size(); ++i) {
    EXPECT_NEAR(a.truth.samples[i].pose.x, b.truth.samples[i].pose.x, 1e-12);
    EXPECT_NEAR(a.truth.samples[i].pose.y, b.truth.samples[i].pose.y, 1e-12);
  }
}

TEST(Tachometer, ReportsScaledRpm) {
  SimConfig cfg = quiet();
  cfg.noise.left_scale_error = 1.1;
  const std::vector<double> rpms = {30.0, 60.0};
  const auto rows = simulate_tachometer_session(cfg, rpms, 10.0);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].tachometer_rpm, 30.0);
  EXPECT_NEAR(rows[0].encoder_rpm_left, 33.0, 0.01);
  EXPECT_NEAR(rows[1].encoder_rpm_right, 60.0, 0.01);
}

}  // namespace
}  // namespace odokit
