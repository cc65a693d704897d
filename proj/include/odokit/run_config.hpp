#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "odokit/simulator.hpp"

namespace odokit {

// Everything needed to reproduce one simulate run.
//
// JSON layout (every section optional, every field defaulted):
//   geometry:   wheel_radius, track_width, max_wheel_speed_rpm
//   encoder:    pulses_per_rev, quadrature_multiplier, transmission_ratio
//   filter:     kind (none|moving_average|exponential), window, alpha
//   integrator: heading_mode (start_of_step|midpoint)
//   sim:        dt, sample_period
//   noise:      left_scale_error, right_scale_error, slip_noise_std, seed
//   plan:       square_side | waypoints [[x,y],...], cruise_speed, turn_rate,
//               final_heading | final_turn, align_to_sample_period
//   calibration_profile: path, relative to the config file
//   output_dir: path, relative to the config file
// Unknown keys are rejected.
struct RunConfig {
  SimConfig sim;
  WaypointPlan plan;
  std::optional<std::filesystem::path> profile_path;
  std::optional<std::filesystem::path> output_dir;

  void validate() const;
};

// Throws SchemaError with the offending field path, or ConfigError/PlanError
// when values violate invariants.
RunConfig run_config_from_json(const std::string& text, const std::string& source,
                               const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

// Fully resolved configuration, all defaults written out.
std::string run_config_to_json(const RunConfig& cfg);

// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace odokit
