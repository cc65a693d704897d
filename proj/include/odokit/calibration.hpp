#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "odokit/kinematics.hpp"

namespace odokit {

struct RpmAnchor {
  double measured = 0.0;   // encoder reading, rpm
  double reference = 0.0;  // tachometer reading, rpm

  bool operator==(const RpmAnchor&) const = default;
};

// Piecewise-linear map from encoder rpm to true rpm. An empty table is the
// identity; otherwise it holds at least two anchors with strictly increasing
// measured values.
struct RpmCalibrationTable {
  std::vector<RpmAnchor> anchors;

  bool is_identity() const { return anchors.empty(); }
  void validate() const;  // throws FitError
  bool operator==(const RpmCalibrationTable&) const = default;
};

struct WheelBalanceFactors {
  double left_scale = 1.0;   // corrected = raw * scale
  double right_scale = 1.0;

  void validate() const;
  bool operator==(const WheelBalanceFactors&) const = default;
};

struct HeadingGain {
  double gain = 1.0;  // multiplies each integrated heading change

  void validate() const;
  bool operator==(const HeadingGain&) const = default;
};

// The three corrections applied in order: rpm table, balance, heading gain.
// Default-constructed profiles are the identity.
struct CalibrationProfile {
  RpmCalibrationTable rpm_table_left;
  RpmCalibrationTable rpm_table_right;
  WheelBalanceFactors balance;
  HeadingGain heading;
  std::map<std::string, std::string> metadata;

  bool is_identity() const;
  void validate() const;
  bool operator==(const CalibrationProfile&) const = default;
};

// Sorts the pairs by encoder rpm. Requires >= 2 pairs with distinct encoder
// readings, finite values and positive references where the reading is
// positive; throws FitError otherwise.
RpmCalibrationTable fit_rpm_correction(std::span<const RpmAnchor> pairs);

// Maps |raw_rpm| through the table (exact at anchors, linear between them,
// linear extrapolation outside) and restores the sign. Zero maps to zero.
double apply_rpm_correction(const RpmCalibrationTable& table, double raw_rpm);

struct WheelSpeedPair {
  double left = 0.0;   // rad/s
  double right = 0.0;  // rad/s
};

// Scales both wheels onto the mean of the per-pair midpoints, so the
// corrected column means coincide. All speeds must be nonzero and share one
// sign; throws FitError otherwise.
WheelBalanceFactors fit_wheel_balance(std::span<const WheelSpeedPair> paired_speeds);

// gain = actual / mean(raw). Throws FitError on empty input or zero mean/actual.
HeadingGain fit_heading_gain(std::span<const double> raw_estimates_deg, double actual_deg);

// One tachometer comparison row: encoder readings of both wheels against
// the tachometer at one speed.
struct TachometerReading {
  double tachometer_rpm = 0.0;
  double encoder_rpm_left = 0.0;
  double encoder_rpm_right = 0.0;
};

struct RpmTables {
  RpmCalibrationTable left;
  RpmCalibrationTable right;
};

// Fits one table per wheel from the same tachometer session.
RpmTables fit_rpm_tables(std::span<const TachometerReading> readings);

// Applies rpm correction then balance to one wheel rate (rad/s).
double correct_left_speed(const CalibrationProfile& profile, double rad_s);
double correct_right_speed(const CalibrationProfile& profile, double rad_s);

struct TimedWheelSpeeds {
  double t = 0.0;
  WheelAngularSpeeds speeds;

  bool operator==(const TimedWheelSpeeds&) const = default;
};

// Per-wheel rpm correction then balance scale. The heading gain is not
// applied here; it acts on heading increments inside the odometry loop.
std::vector<TimedWheelSpeeds> apply_profile(const CalibrationProfile& profile,
                                            std::span<const TimedWheelSpeeds> raw);

}  // namespace odokit
