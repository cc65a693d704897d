#include "odokit/profile_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "odokit/csv_io.hpp"
#include "odokit/errors.hpp"

namespace odokit {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw SchemaError(where + ": unknown field '" + key + "'");
    }
  }
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) {
    throw SchemaError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) {
    throw SchemaError(where + ": expected a number");
  }
  return v.get<double>();
}

RpmCalibrationTable table_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array()) {
    throw SchemaError(where + ": expected an array of [measured, reference] pairs");
  }
  RpmCalibrationTable table;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!arr[i].is_array() || arr[i].size() != 2) {
      throw SchemaError(at + ": expected [measured, reference]");
    }
    table.anchors.push_back({number(arr[i][0], at), number(arr[i][1], at)});
  }
  try {
    table.validate();
  } catch (const FitError& e) {
    throw SchemaError(where + ": " + e.what());
  }
  return table;
}

json table_to_json(const RpmCalibrationTable& table) {
  json arr = json::array();
  for (const auto& a : table.anchors) {
    arr.push_back({a.measured, a.reference});
  }
  return arr;
}

}  // namespace

CalibrationProfile profile_from_json(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(source + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw SchemaError(source + ": profile must be a JSON object");
  }
  reject_unknown(doc, {"rpm_table_left", "rpm_table_right", "balance", "heading_gain", "metadata"},
                 source);

  CalibrationProfile profile;
  profile.rpm_table_left =
      table_from_json(field(doc, "rpm_table_left", source), source + ": rpm_table_left");
  profile.rpm_table_right =
      table_from_json(field(doc, "rpm_table_right", source), source + ": rpm_table_right");

  const json& balance = field(doc, "balance", source);
  const std::string bwhere = source + ": balance";
  if (!balance.is_object()) {
    throw SchemaError(bwhere + ": expected an object");
  }
  reject_unknown(balance, {"left_scale", "right_scale"}, bwhere);
  profile.balance.left_scale = number(field(balance, "left_scale", bwhere), bwhere + ".left_scale");
  profile.balance.right_scale =
      number(field(balance, "right_scale", bwhere), bwhere + ".right_scale");

  profile.heading.gain = number(field(doc, "heading_gain", source), source + ": heading_gain");

  const json& meta = field(doc, "metadata", source);
  if (!meta.is_object()) {
    throw SchemaError(source + ": metadata must be an object of strings");
  }
  for (const auto& [key, value] : meta.items()) {
    if (!value.is_string()) {
      throw SchemaError(source + ": metadata." + key + " must be a string");
    }
    profile.metadata[key] = value.get<std::string>();
  }

  try {
    profile.validate();
  } catch (const FitError& e) {
    throw SchemaError(source + ": " + e.what());
  }
  return profile;
}

std::string profile_to_json(const CalibrationProfile& profile) {
  nlohmann::ordered_json doc;
  doc["rpm_table_left"] = table_to_json(profile.rpm_table_left);
  doc["rpm_table_right"] = table_to_json(profile.rpm_table_right);
  doc["balance"] = {{"left_scale", profile.balance.left_scale},
                    {"right_scale", profile.balance.right_scale}};
  doc["heading_gain"] = profile.heading.gain;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : profile.metadata) {
    doc["metadata"][k] = v;
  }
  return doc.dump(2) + "\n";
}

CalibrationProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open profile " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return profile_from_json(ss.str(), path.string());
}

void save_profile_atomic(const CalibrationProfile& profile, const std::filesystem::path& path) {
  profile.validate();
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  write_text_file(tmp, profile_to_json(profile));
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot replace " + path.string());
  }
}

}  // namespace odokit
