#include "odokit/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "odokit/errors.hpp"

namespace odokit {

void RpmCalibrationTable::validate() const {
  if (anchors.empty()) {
    return;
  }
  if (anchors.size() < 2) {
    throw FitError("rpm table needs at least two anchors");
  }
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const RpmAnchor& a = anchors[i];
    if (!std::isfinite(a.measured) || !std::isfinite(a.reference)) {
      throw FitError("rpm anchor " + std::to_string(i) + " is not finite");
    }
    if (a.measured > 0.0 && !(a.reference > 0.0)) {
      throw FitError("rpm anchor " + std::to_string(i) + " has a non-positive reference");
    }
    if (i > 0 && !(a.measured > anchors[i - 1].measured)) {
      throw FitError("rpm anchors must have strictly increasing measured values");
    }
  }
}

void WheelBalanceFactors::validate() const {
  if (!(left_scale > 0.0) || !(right_scale > 0.0) || !std::isfinite(left_scale) ||
      !std::isfinite(right_scale)) {
    throw FitError("balance scales must be positive and finite");
  }
}

void HeadingGain::validate() const {
  if (!(gain > 0.0) || !std::isfinite(gain)) {
    throw FitError("heading gain must be positive and finite");
  }
}

bool CalibrationProfile::is_identity() const {
  return rpm_table_left.is_identity() && rpm_table_right.is_identity() &&
         balance.left_scale == 1.0 && balance.right_scale == 1.0 && heading.gain == 1.0;
}

void CalibrationProfile::validate() const {
  rpm_table_left.validate();
  rpm_table_right.validate();
  balance.validate();
  heading.validate();
}

RpmCalibrationTable fit_rpm_correction(std::span<const RpmAnchor> pairs) {
  if (pairs.size() < 2) {
    throw FitError("rpm fit needs at least two (encoder, tachometer) pairs");
  }
  RpmCalibrationTable table{{pairs.begin(), pairs.end()}};
  std::sort(table.anchors.begin(), table.anchors.end(),
            [](const RpmAnchor& a, const RpmAnchor& b) { return a.measured < b.measured; });
  for (std::size_t i = 1; i < table.anchors.size(); ++i) {
    if (table.anchors[i].measured == table.anchors[i - 1].measured) {
      throw FitError("duplicate encoder rpm " + std::to_string(table.anchors[i].measured));
    }
  }
  table.validate();
  return table;
}

RpmTables fit_rpm_tables(std::span<const TachometerReading> readings) {
  std::vector<RpmAnchor> left;
  std::vector<RpmAnchor> right;
  for (const auto& r : readings) {
    left.push_back({r.encoder_rpm_left, r.tachometer_rpm});
    right.push_back({r.encoder_rpm_right, r.tachometer_rpm});
  }
  return {fit_rpm_correction(left), fit_rpm_correction(right)};
}

double apply_rpm_correction(const RpmCalibrationTable& table, double raw_rpm) {
  if (table.is_identity() || raw_rpm == 0.0) {
    return raw_rpm;
  }
  const double magnitude = std::abs(raw_rpm);
  const auto& anchors = table.anchors;
  auto upper = std::lower_bound(anchors.begin(), anchors.end(), magnitude,
                                [](const RpmAnchor& a, double v) { return a.measured < v; });
  double mapped;
  if (upper != anchors.end() && upper->measured == magnitude) {
    mapped = upper->reference;
  } else {
    // Segment [lo, hi] containing the value, or the end segment to extrapolate.
    if (upper == anchors.begin()) {
      upper = anchors.begin() + 1;
    } else if (upper == anchors.end()) {
      upper = anchors.end() - 1;
    }
    const RpmAnchor& lo = *(upper - 1);
    const RpmAnchor& hi = *upper;
    mapped = lo.reference +
             (magnitude - lo.measured) * (hi.reference - lo.reference) / (hi.measured - lo.measured);
  }
  return raw_rpm < 0.0 ? -mapped : mapped;
}

WheelBalanceFactors fit_wheel_balance(std::span<const WheelSpeedPair> paired_speeds) {
  if (paired_speeds.empty()) {
    throw FitError("balance fit needs at least one speed pair");
  }
  const bool positive = paired_speeds.front().left > 0.0;
  double sum_left = 0.0;
  double sum_right = 0.0;
  for (std::size_t i = 0; i < paired_speeds.size(); ++i) {
    const auto& p = paired_speeds[i];
    if (!std::isfinite(p.left) || !std::isfinite(p.right) || p.left == 0.0 || p.right == 0.0) {
      throw FitError("balance pair " + std::to_string(i) + " has a zero or non-finite speed");
    }
    if ((p.left > 0.0) != positive || (p.right > 0.0) != positive) {
      throw FitError("balance pair " + std::to_string(i) + " mixes driving directions");
    }
    sum_left += p.left;
    sum_right += p.right;
  }
  const double n = static_cast<double>(paired_speeds.size());
  const double mean_left = sum_left / n;
  const double mean_right = sum_right / n;
  const double midpoint = 0.5 * (mean_left + mean_right);
  WheelBalanceFactors factors{midpoint / mean_left, midpoint / mean_right};
  factors.validate();
  return factors;
}

HeadingGain fit_heading_gain(std::span<const double> raw_estimates_deg, double actual_deg) {
  if (raw_estimates_deg.empty()) {
    throw FitError("heading fit needs at least one raw estimate");
  }
  if (actual_deg == 0.0 || !std::isfinite(actual_deg)) {
    throw FitError("actual heading must be nonzero");
  }
  double sum = 0.0;
  for (double v : raw_estimates_deg) sum += v;
  const double mean = sum / static_cast<double>(raw_estimates_deg.size());
  if (mean == 0.0 || !std::isfinite(mean)) {
    throw FitError("mean raw heading is zero");
  }
  HeadingGain gain{actual_deg / mean};
  gain.validate();
  return gain;
}

namespace {

double correct_wheel(const RpmCalibrationTable& table, double scale, double rad_s) {
  double corrected = rad_s;
  if (!table.is_identity()) {
    corrected = rpm_to_rad_s(apply_rpm_correction(table, rad_s_to_rpm(rad_s)));
  }
  return corrected * scale;
}

}  // namespace

double correct_left_speed(const CalibrationProfile& profile, double rad_s) {
  return correct_wheel(profile.rpm_table_left, profile.balance.left_scale, rad_s);
}

double correct_right_speed(const CalibrationProfile& profile, double rad_s) {
  return correct_wheel(profile.rpm_table_right, profile.balance.right_scale, rad_s);
}

std::vector<TimedWheelSpeeds> apply_profile(const CalibrationProfile& profile,
                                            std::span<const TimedWheelSpeeds> raw) {
  profile.validate();
  std::vector<TimedWheelSpeeds> out;
  out.reserve(raw.size());
  for (const auto& s : raw) {
    out.push_back({s.t,
                   {correct_left_speed(profile, s.speeds.left),
                    correct_right_speed(profile, s.speeds.right)}});
  }
  return out;
}

}  // namespace odokit
