#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "odokit/trajectory.hpp"

namespace odokit {

struct PositionError {
  double dx = 0.0;  // estimate - truth, m
  double dy = 0.0;
  double norm = 0.0;
};

struct WaypointError {
  std::size_t index = 0;
  double dx = 0.0;
  double dy = 0.0;
};

struct ErrorReport {
  double endpoint_error_x = 0.0;
  double endpoint_error_y = 0.0;
  double endpoint_error_norm = 0.0;
  std::vector<WaypointError> per_waypoint_errors;
  double path_length = 0.0;  // of the truth trajectory
};

// Final-position difference, estimate minus truth, in the truth frame.
// Throws ArgumentError if either trajectory is empty.
PositionError endpoint_error(const Trajectory& estimate, const Trajectory& truth);

// Pose at time t: linear in position, shortest arc in heading. Throws
// ArgumentError outside the trajectory's time span.
Pose2D pose_at(const Trajectory& traj, double t);

std::vector<WaypointError> waypoint_errors(const Trajectory& estimate, const Trajectory& truth,
                                           std::span<const double> waypoint_times);

double path_length(const Trajectory& traj);

ErrorReport make_report(const Trajectory& estimate, const Trajectory& truth,
                        std::span<const double> waypoint_times);

// Compact JSON with the ErrorReport field names.
std::string report_to_json(const ErrorReport& report);

// SVG overlay of both paths: truth solid, estimate dashed, circles at the
// starts and squares at the ends, metre ticks on both axes. Output depends
// only on the inputs.
std::string render_paths_svg(const Trajectory& estimate, const Trajectory& truth);

// Writes render_paths_svg to disk. Throws IoError.
void render_paths(const Trajectory& estimate, const Trajectory& truth,
                  const std::filesystem::path& output);

// Drops repeated points and interior points that lie on a straight line
// through their neighbours (within 1e-9 m).
std::vector<Pose2D> simplify_polyline(const Trajectory& traj);

}  // namespace odokit
