#pragma once

#include <filesystem>
#include <string>

#include "odokit/calibration.hpp"

namespace odokit {

// JSON document:
//   {"rpm_table_left": [[measured, reference], ...],
//    "rpm_table_right": [...],
//    "balance": {"left_scale": s, "right_scale": s},
//    "heading_gain": g,
//    "metadata": {"key": "value", ...}}
// All five fields are required and unknown fields are rejected.
CalibrationProfile profile_from_json(const std::string& text, const std::string& source);
std::string profile_to_json(const CalibrationProfile& profile);

// Throws IoError / SchemaError.
CalibrationProfile load_profile(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames it over `path`, so a
// failure never leaves a partially written profile behind.
void save_profile_atomic(const CalibrationProfile& profile, const std::filesystem::path& path);

}  // namespace odokit
