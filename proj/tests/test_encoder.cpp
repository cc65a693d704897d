#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "odokit/encoder.hpp"
#include "odokit/errors.hpp"

namespace odokit {
namespace {

// A:B levels of an ideal quadrature waveform, one entry per edge.
std::vector<std::pair<bool, bool>> waveform(int cycles, bool forward) {
  static const std::pair<bool, bool> kForward[4] = {{1, 0}, {1, 1}, {0, 1}, {0, 0}};
  static const std::pair<bool, bool> kReverse[4] = {{0, 1}, {1, 1}, {1, 0}, {0, 0}};
  std::vector<std::pair<bool, bool>> edges;
  for (int c = 0; c < cycles; ++c) {
    for (int i = 0; i < 4; ++i) edges.push_back(forward ? kForward[i] : kReverse[i]);
  }
  return edges;
}

TEST(DecodeQuadrature, TransitionTable) {
  const QuadratureState zero{};
  auto up = decode_quadrature(zero, true, false);
  EXPECT_EQ(up.delta, 1);
  EXPECT_FALSE(up.glitch);
  EXPECT_EQ(up.state.count, 1);

  auto down = decode_quadrature(zero, false, true);
  EXPECT_EQ(down.delta, -1);
  EXPECT_EQ(down.state.count, -1);

  auto bad = decode_quadrature(zero, true, true);
  EXPECT_EQ(bad.delta, 0);
  EXPECT_TRUE(bad.glitch);
  EXPECT_EQ(bad.state.glitches, 1u);
  EXPECT_EQ(bad.state.count, 0);

  auto same = decode_quadrature(zero, false, false);
  EXPECT_EQ(same.delta, 0);
  EXPECT_FALSE(same.glitch);
}

TEST(DecodeQuadrature, FullCyclesCountFourPerCycle) {
  for (int n : {1, 3, 100, 2500}) {
    for (bool fwd : {true, false}) {
      QuadratureState s;
      for (auto [a, b] : waveform(n, fwd)) s = decode_quadrature(s, a, b).state;
      EXPECT_EQ(s.count, fwd ? 4 * n : -4 * n);
      EXPECT_EQ(s.glitches, 0u);
    }
  }
}

TEST(CountsToWheelAngle, DefaultConfig) {
  const EncoderConfig cfg;
  EXPECT_EQ(cfg.counts_per_wheel_rev(), 12000.0);
  EXPECT_DOUBLE_EQ(counts_to_wheel_angle(12000, cfg), kTwoPi);
  EXPECT_EQ(counts_to_wheel_angle(0, cfg), 0.0);
  EXPECT_DOUBLE_EQ(counts_to_wheel_angle(6000, cfg), kPi);
  EXPECT_DOUBLE_EQ(counts_to_wheel_angle(-6000, cfg), -kPi);
}

TEST(CountsToWheelAngle, MultiplierIsConfigurable) {
  EncoderConfig x1;
  x1.quadrature_multiplier = 1;
  EXPECT_DOUBLE_EQ(counts_to_wheel_angle(3000, x1), kTwoPi);
  EncoderConfig bad;
  bad.quadrature_multiplier = 3;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(CountsToRpm, Examples) {
  const EncoderConfig cfg;
  EXPECT_DOUBLE_EQ(counts_to_rpm(12000, 1.0, cfg), 60.0);
  EXPECT_EQ(counts_to_rpm(0, 1.0, cfg), 0.0);
  EXPECT_DOUBLE_EQ(counts_to_rpm(200, 1.0, cfg), 1.0);
  EXPECT_THROW(counts_to_rpm(200, 0.0, cfg), ArgumentError);
  EXPECT_THROW(counts_to_rpm(200, -1.0, cfg), ArgumentError);
}

TEST(CountArc, ResolutionBound) {
  const EncoderConfig cfg;
  const double radius = 0.15;
  const double arc = radius * counts_to_wheel_angle(1, cfg);
  EXPECT_NEAR(arc, 7.853981633974483e-05, 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double angle = ang(rng);
    const auto counts = static_cast<std::int64_t>(std::floor(angle / kTwoPi * 12000.0));
    EXPECT_LT(std::abs(radius * (counts_to_wheel_angle(counts, cfg) - angle)), arc);
  }
}

TEST(SpeedFilter, NoneIsIdentity) {
  SpeedFilter f({FilterKind::kNone, 3, 0.5});
  for (double v : {1.0, -2.5, 1e-9, 37.0}) EXPECT_EQ(f.update(v), v);
}

TEST(SpeedFilter, MovingAverageSteadyState) {
  for (int w : {1, 2, 3, 7}) {
    SpeedFilter f({FilterKind::kMovingAverage, w, 0.5});
    f.update(100.0);
    double out = 0.0;
    for (int i = 0; i < w; ++i) out = f.update(1.25);
    EXPECT_DOUBLE_EQ(out, 1.25);
  }
}

TEST(SpeedFilter, MovingAverageWarmup) {
  SpeedFilter f({FilterKind::kMovingAverage, 3, 0.5});
  EXPECT_DOUBLE_EQ(f.update(3.0), 3.0);
  EXPECT_DOUBLE_EQ(f.update(6.0), 4.5);
  EXPECT_DOUBLE_EQ(f.update(9.0), 6.0);
  EXPECT_DOUBLE_EQ(f.update(0.0), 5.0);
}

TEST(SpeedFilter, Exponential) {
  SpeedFilter f({FilterKind::kExponential, 1, 0.25});
  EXPECT_DOUBLE_EQ(f.update(4.0), 4.0);
  EXPECT_DOUBLE_EQ(f.update(8.0), 5.0);
  f.reset();
  EXPECT_DOUBLE_EQ(f.update(8.0), 8.0);
}

TEST(SpeedFilter, RejectsBadConfig) {
  EXPECT_THROW(SpeedFilter({FilterKind::kMovingAverage, 0, 0.5}), ConfigError);
  EXPECT_THROW(SpeedFilter({FilterKind::kExponential, 1, 0.0}), ConfigError);
  EXPECT_THROW(filter_kind_from_string("kalman"), ConfigError);
}

TEST(SamplesToSpeeds, OneRevPerSecond) {
  const std::vector<EncoderSample> log = {{0, 0, 0}, {1000, 12000, 12000}};
  const auto out = samples_to_speeds(log, EncoderConfig{}, {FilterKind::kNone, 1, 1.0});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_DOUBLE_EQ(out[0].speeds.left, kTwoPi);
  EXPECT_DOUBLE_EQ(out[0].speeds.right, kTwoPi);
  EXPECT_DOUBLE_EQ(out[0].t, 1.0);
  EXPECT_DOUBLE_EQ(out[0].dt, 1.0);
  const WheelDisplacements d = out[0].displacements(VehicleGeometry{});
  EXPECT_DOUBLE_EQ(d.left, 0.15 * kTwoPi);
  EXPECT_EQ(d.center, 0.5 * (d.left + d.right));
}

TEST(SamplesToSpeeds, ConstantCountsAreStill) {
  const std::vector<EncoderSample> log = {{0, 5, -7}, {1000, 5, -7}, {2000, 5, -7}};
  for (const auto& iv : samples_to_speeds(log, EncoderConfig{}, SpeedFilterConfig{})) {
    EXPECT_EQ(iv.speeds.left, 0.0);
    EXPECT_EQ(iv.speeds.right, 0.0);
    EXPECT_EQ(iv.left_angle, 0.0);
    EXPECT_EQ(iv.right_angle, 0.0);
  }
}

TEST(SamplesToSpeeds, NoFilterGivesRawQuotients) {
  const std::vector<EncoderSample> log = {{0, 0, 0}, {1000, 100, 300}, {1500, 700, 100}};
  const auto out = samples_to_speeds(log, EncoderConfig{}, {FilterKind::kNone, 1, 1.0});
  for (const auto& iv : out) {
    EXPECT_EQ(iv.speeds, iv.raw_speeds);
    EXPECT_EQ(iv.raw_speeds.left, iv.left_angle / iv.dt);
  }
}

TEST(SamplesToSpeeds, NonMonotoneTimestampsNameTheIndex) {
  const std::vector<EncoderSample> log = {{0, 0, 0}, {1000, 1, 1}, {1000, 2, 2}};
  try {
    samples_to_speeds(log, EncoderConfig{}, SpeedFilterConfig{});
    FAIL() << "expected StreamError";
  } catch (const StreamError& e) {
    EXPECT_EQ(e.index(), 2u);
  }
  const std::vector<EncoderSample> one = {{0, 0, 0}};
  EXPECT_THROW(samples_to_speeds(one, EncoderConfig{}, SpeedFilterConfig{}), StreamError);
}

TEST(SamplesToSpeeds, FilterNeverTouchesDisplacements) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> step(-3000, 3000);
  std::vector<EncoderSample> log{{0, 0, 0}};
  for (int i = 1; i < 200; ++i) {
    const auto& p = log.back();
    log.push_back({p.t_ms + 1000, p.left_count + step(rng), p.right_count + step(rng)});
  }
  const auto base = samples_to_speeds(log, EncoderConfig{}, {FilterKind::kNone, 1, 1.0});
  for (const SpeedFilterConfig& f : {SpeedFilterConfig{FilterKind::kMovingAverage, 5, 0.5},
                                     SpeedFilterConfig{FilterKind::kExponential, 1, 0.1}}) {
    const auto filtered = samples_to_speeds(log, EncoderConfig{}, f);
    ASSERT_EQ(filtered.size(), base.size());
    std::int64_t left_total = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      EXPECT_EQ(filtered[i].left_angle, base[i].left_angle);
      EXPECT_EQ(filtered[i].right_angle, base[i].right_angle);
      left_total += filtered[i].left_counts;
    }
    EXPECT_EQ(left_total, log.back().left_count - log.front().left_count);
  }
}

}  // namespace
}  // namespace odokit
