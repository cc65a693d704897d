#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "odokit/encoder.hpp"
#include "odokit/trajectory.hpp"

namespace odokit {

inline constexpr const char* kEncoderLogHeader = "t_ms,left_count,right_count";
inline constexpr const char* kTrajectoryHeader = "t_s,x_m,y_m,theta_rad";

// A comma-separated file with a header row. Rows keep their 1-based line
// numbers for diagnostics.
struct CsvTable {
  std::vector<std::string> header;
  struct Row {
    std::size_t line = 0;
    std::vector<std::string> fields;
  };
  std::vector<Row> rows;

  // Index of a named column. Throws SchemaError naming the missing column.
  std::size_t column(const std::string& name) const;
};

// Throws SchemaError on ragged rows or an empty document.
CsvTable parse_csv(std::istream& in, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);  // IoError if unreadable

// Strict number parsing; SchemaError mentions source and line.
double parse_double(const std::string& text, const std::string& source, std::size_t line);
std::int64_t parse_int(const std::string& text, const std::string& source, std::size_t line);

// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

std::vector<EncoderSample> parse_encoder_log(std::istream& in, const std::string& source);
std::vector<EncoderSample> read_encoder_log(const std::filesystem::path& path);
void write_encoder_log(std::ostream& out, std::span<const EncoderSample> samples);

Trajectory parse_trajectory(std::istream& in, const std::string& source);
Trajectory read_trajectory(const std::filesystem::path& path);
void write_trajectory(std::ostream& out, const Trajectory& traj);

// Writes text to a file, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace odokit
