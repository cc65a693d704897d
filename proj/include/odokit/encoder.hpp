#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "odokit/kinematics.hpp"

namespace odokit {

struct EncoderConfig {
  int pulses_per_rev = 600;        // encoder shaft pulses
  int quadrature_multiplier = 4;   // 1, 2 or 4 counted edges per pulse
  double transmission_ratio = 5.0; // encoder revs per wheel rev (20:100 pulleys)
  double sample_period = 1.0;      // s

  double counts_per_wheel_rev() const {
    return static_cast<double>(pulses_per_rev) * quadrature_multiplier * transmission_ratio;
  }

  // Throws ConfigError.
  void validate() const;
};

// One row of an encoder log: cumulative signed counts at time t_ms.
struct EncoderSample {
  std::int64_t t_ms = 0;
  std::int64_t left_count = 0;
  std::int64_t right_count = 0;

  bool operator==(const EncoderSample&) const = default;
};

// x4 decoder state for one channel pair.
struct QuadratureState {
  bool phase_a = false;
  bool phase_b = false;
  std::int64_t count = 0;
  std::uint64_t glitches = 0;
};

struct QuadratureStep {
  QuadratureState state;
  int delta = 0;  // -1, 0 or +1
  bool glitch = false;
};

// Gray-code decoding: A:B 00 -> 10 -> 11 -> 01 -> 00 counts up, the reverse
// order counts down. A transition that changes both phases at once is
// illegal: the count is left alone and the glitch counter is incremented.
QuadratureStep decode_quadrature(const QuadratureState& state, bool new_a, bool new_b);

double counts_to_wheel_angle(std::int64_t delta_counts, const EncoderConfig& cfg);

// Wheel rpm from a count delta over dt seconds. Throws ArgumentError if dt <= 0.
double counts_to_rpm(std::int64_t delta_counts, double dt, const EncoderConfig& cfg);

enum class FilterKind { kNone, kMovingAverage, kExponential };

std::string to_string(FilterKind kind);
// Throws ConfigError on an unknown name.
FilterKind filter_kind_from_string(const std::string& name);

struct SpeedFilterConfig {
  FilterKind kind = FilterKind::kMovingAverage;
  int window = 3;      // moving average length, samples
  double alpha = 0.5;  // exponential smoothing weight of the newest sample

  void validate() const;
};

// Causal smoother for one wheel's speed signal.
class SpeedFilter {
 public:
  explicit SpeedFilter(const SpeedFilterConfig& cfg);

  double update(double raw);
  void reset();

 private:
  SpeedFilterConfig cfg_;
  std::deque<double> history_;
  double state_ = 0.0;
  bool primed_ = false;
};

// One sampling interval between consecutive log rows.
struct OdometryInterval {
  double t = 0.0;   // end of interval, s
  double dt = 0.0;  // s
  std::int64_t left_counts = 0;   // count delta
  std::int64_t right_counts = 0;
  double left_angle = 0.0;   // wheel rotation over the interval, rad
  double right_angle = 0.0;
  WheelAngularSpeeds raw_speeds;  // angle / dt, unfiltered
  WheelAngularSpeeds speeds;      // after the smoothing filter

  // Ground travel for a wheel of the given radius. Never filtered.
  WheelDisplacements displacements(const VehicleGeometry& geom) const {
    return WheelDisplacements::from_wheels(geom.wheel_radius * left_angle,
                                           geom.wheel_radius * right_angle);
  }
};

// Turns a sample stream into per-interval speeds and wheel rotations.
// Throws StreamError (with the offending index) when timestamps do not
// strictly increase or fewer than two samples are given.
std::vector<OdometryInterval> samples_to_speeds(std::span<const EncoderSample> stream,
                                                const EncoderConfig& cfg,
                                                const SpeedFilterConfig& filter);

}  // namespace odokit
