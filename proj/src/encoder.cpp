#include "odokit/encoder.hpp"

#include <array>
#include <cmath>

#include "odokit/errors.hpp"

namespace odokit {

void EncoderConfig::validate() const {
  if (pulses_per_rev <= 0) {
    throw ConfigError("pulses_per_rev must be positive");
  }
  if (quadrature_multiplier != 1 && quadrature_multiplier != 2 && quadrature_multiplier != 4) {
    throw ConfigError("quadrature_multiplier must be 1, 2 or 4");
  }
  if (!(transmission_ratio > 0.0) || !std::isfinite(transmission_ratio)) {
    throw ConfigError("transmission_ratio must be positive");
  }
  if (!(sample_period > 0.0) || !std::isfinite(sample_period)) {
    throw ConfigError("sample_period must be positive");
  }
}

QuadratureStep decode_quadrature(const QuadratureState& state, bool new_a, bool new_b) {
  // Position of each A:B code along the forward cycle 00, 10, 11, 01.
  static constexpr std::array<int, 4> kCyclePos = {0, 3, 1, 2};  // index = a*2 + b
  const int from = kCyclePos[(state.phase_a ? 2 : 0) + (state.phase_b ? 1 : 0)];
  const int to = kCyclePos[(new_a ? 2 : 0) + (new_b ? 1 : 0)];

  QuadratureStep step{state, 0, false};
  step.state.phase_a = new_a;
  step.state.phase_b = new_b;
  switch ((to - from + 4) % 4) {
    case 0:
      break;
    case 1:
      step.delta = 1;
      break;
    case 3:
      step.delta = -1;
      break;
    default:
      step.glitch = true;
      ++step.state.glitches;
      break;
  }
  step.state.count += step.delta;
  return step;
}

double counts_to_wheel_angle(std::int64_t delta_counts, const EncoderConfig& cfg) {
  return kTwoPi * static_cast<double>(delta_counts) / cfg.counts_per_wheel_rev();
}

double counts_to_rpm(std::int64_t delta_counts, double dt, const EncoderConfig& cfg) {
  if (!(dt > 0.0)) {
    throw ArgumentError("dt must be positive");
  }
  return static_cast<double>(delta_counts) / cfg.counts_per_wheel_rev() / dt * 60.0;
}

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::kNone:
      return "none";
    case FilterKind::kMovingAverage:
      return "moving_average";
    case FilterKind::kExponential:
      return "exponential";
  }
  return "unknown";
}

FilterKind filter_kind_from_string(const std::string& name) {
  if (name == "none") return FilterKind::kNone;
  if (name == "moving_average") return FilterKind::kMovingAverage;
  if (name == "exponential") return FilterKind::kExponential;
  throw ConfigError("unknown filter kind '" + name + "'");
}

void SpeedFilterConfig::validate() const {
  if (window < 1) {
    throw ConfigError("filter window must be >= 1");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("filter alpha must be in (0, 1]");
  }
}

SpeedFilter::SpeedFilter(const SpeedFilterConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

double SpeedFilter::update(double raw) {
  switch (cfg_.kind) {
    case FilterKind::kNone:
      return raw;
    case FilterKind::kMovingAverage: {
      history_.push_back(raw);
      if (history_.size() > static_cast<std::size_t>(cfg_.window)) {
        history_.pop_front();
      }
      // Summed fresh each call; a running sum would drift.
      double sum = 0.0;
      for (double v : history_) sum += v;
      return sum / static_cast<double>(history_.size());
    }
    case FilterKind::kExponential:
      state_ = primed_ ? cfg_.alpha * raw + (1.0 - cfg_.alpha) * state_ : raw;
      primed_ = true;
      return state_;
  }
  return raw;
}

void SpeedFilter::reset() {
  history_.clear();
  state_ = 0.0;
  primed_ = false;
}

std::vector<OdometryInterval> samples_to_speeds(std::span<const EncoderSample> stream,
                                                const EncoderConfig& cfg,
                                                const SpeedFilterConfig& filter) {
  cfg.validate();
  if (stream.size() < 2) {
    throw StreamError(stream.size(), "at least two samples are required");
  }
  SpeedFilter left_filter(filter);
  SpeedFilter right_filter(filter);

  std::vector<OdometryInterval> out;
  out.reserve(stream.size() - 1);
  for (std::size_t i = 1; i < stream.size(); ++i) {
    const EncoderSample& prev = stream[i - 1];
    const EncoderSample& cur = stream[i];
    if (cur.t_ms <= prev.t_ms) {
      throw StreamError(i, "timestamp " + std::to_string(cur.t_ms) +
                               " ms does not increase (previous " +
                               std::to_string(prev.t_ms) + " ms)");
    }
    OdometryInterval iv;
    iv.t = static_cast<double>(cur.t_ms) * 1e-3;
    iv.dt = static_cast<double>(cur.t_ms - prev.t_ms) * 1e-3;
    iv.left_counts = cur.left_count - prev.left_count;
    iv.right_counts = cur.right_count - prev.right_count;
    iv.left_angle = counts_to_wheel_angle(iv.left_counts, cfg);
    iv.right_angle = counts_to_wheel_angle(iv.right_counts, cfg);
    iv.raw_speeds = {iv.left_angle / iv.dt, iv.right_angle / iv.dt};
    iv.speeds = {left_filter.update(iv.raw_speeds.left), right_filter.update(iv.raw_speeds.right)};
    out.push_back(iv);
  }
  return out;
}

}  // namespace odokit
