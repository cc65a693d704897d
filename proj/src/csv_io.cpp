#include "odokit/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "odokit/errors.hpp"

namespace odokit {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  return in;
}

void require_header(const CsvTable& table, const std::string& expected, const std::string& source) {
  if (join(table.header) != expected) {
    throw SchemaError(where(source, 1) + ": expected header '" + expected + "', got '" +
                      join(table.header) + "'");
  }
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw SchemaError("missing column '" + name + "'");
}

CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (!have_header) {
      table.header = split_fields(line);
      have_header = true;
      continue;
    }
    auto fields = split_fields(line);
    if (fields.size() != table.header.size()) {
      throw SchemaError(where(source, line_no) + ": expected " +
                        std::to_string(table.header.size()) + " fields, got " +
                        std::to_string(fields.size()));
    }
    table.rows.push_back({line_no, std::move(fields)});
  }
  if (!have_header) {
    throw SchemaError(source + ": empty file, no header row");
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return parse_csv(in, path.string());
}

double parse_double(const std::string& text, const std::string& source, std::size_t line) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw SchemaError(where(source, line) + ": '" + text + "' is not a number");
  }
  return value;
}

std::int64_t parse_int(const std::string& text, const std::string& source, std::size_t line) {
  std::int64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw SchemaError(where(source, line) + ": '" + text + "' is not an integer");
  }
  return value;
}

std::string format_double(double value) {
  if (value == 0.0) {
    return "0";  // also folds -0
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<EncoderSample> parse_encoder_log(std::istream& in, const std::string& source) {
  const CsvTable table = parse_csv(in, source);
  require_header(table, kEncoderLogHeader, source);
  std::vector<EncoderSample> samples;
  samples.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    EncoderSample s{parse_int(row.fields[0], source, row.line),
                    parse_int(row.fields[1], source, row.line),
                    parse_int(row.fields[2], source, row.line)};
    if (s.t_ms < 0) {
      throw SchemaError(where(source, row.line) + ": t_ms must be non-negative");
    }
    if (!samples.empty() && s.t_ms <= samples.back().t_ms) {
      throw SchemaError(where(source, row.line) + ": t_ms must strictly increase");
    }
    samples.push_back(s);
  }
  return samples;
}

std::vector<EncoderSample> read_encoder_log(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return parse_encoder_log(in, path.string());
}

void write_encoder_log(std::ostream& out, std::span<const EncoderSample> samples) {
  out << kEncoderLogHeader << '\n';
  for (const auto& s : samples) {
    out << s.t_ms << ',' << s.left_count << ',' << s.right_count << '\n';
  }
}

Trajectory parse_trajectory(std::istream& in, const std::string& source) {
  const CsvTable table = parse_csv(in, source);
  require_header(table, kTrajectoryHeader, source);
  Trajectory traj;
  traj.samples.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    TimedPose p{parse_double(row.fields[0], source, row.line),
                {parse_double(row.fields[1], source, row.line),
                 parse_double(row.fields[2], source, row.line),
                 parse_double(row.fields[3], source, row.line)}};
    if (!traj.empty() && !(p.t > traj.back().t)) {
      throw SchemaError(where(source, row.line) + ": t_s must strictly increase");
    }
    traj.samples.push_back(p);
  }
  return traj;
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return parse_trajectory(in, path.string());
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryHeader << '\n';
  for (const auto& s : traj.samples) {
    out << format_double(s.t) << ',' << format_double(s.pose.x) << ','
        << format_double(s.pose.y) << ',' << format_double(s.pose.theta) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

}  // namespace odokit
