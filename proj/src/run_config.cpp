#include "odokit/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "odokit/errors.hpp"

namespace odokit {

namespace {

using nlohmann::json;

// Typed field access that reports the dotted path of a bad value.
class Section {
 public:
  Section(const json* obj, std::string path) : obj_(obj), path_(std::move(path)) {}

  static Section child(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) {
      return {nullptr, path + key};
    }
    const json& obj = parent.at(key);
    if (!obj.is_object()) {
      throw SchemaError(path + key + ": expected an object");
    }
    return {&obj, path + key};
  }

  void allow(const std::set<std::string>& keys) const {
    if (!obj_) return;
    for (const auto& [key, _] : obj_->items()) {
      if (!keys.contains(key)) {
        throw SchemaError(path_ + "." + key + ": unknown field");
      }
    }
  }

  bool has(const std::string& key) const { return obj_ && obj_->contains(key); }

  const json& raw(const std::string& key) const { return obj_->at(key); }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = obj_->at(key);
    if (!v.is_number()) {
      throw SchemaError(where(key) + ": expected a number");
    }
    return v.get<double>();
  }

  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const json& v = obj_->at(key);
    if (!v.is_number_integer()) {
      throw SchemaError(where(key) + ": expected an integer");
    }
    return v.get<int>();
  }

  std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = obj_->at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw SchemaError(where(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = obj_->at(key);
    if (!v.is_boolean()) {
      throw SchemaError(where(key) + ": expected true or false");
    }
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = obj_->at(key);
    if (!v.is_string()) {
      throw SchemaError(where(key) + ": expected a string");
    }
    return v.get<std::string>();
  }

 private:
  const json* obj_;
  std::string path_;
};

std::string heading_mode_name(HeadingMode mode) {
  return mode == HeadingMode::kMidpoint ? "midpoint" : "start_of_step";
}

// Rethrows invariant violations with the config source attached.
template <typename Fn>
void checked(const std::string& source, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  } catch (const PlanError& e) {
    throw PlanError(source + ": " + e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  sim.validate();
  plan.validate();
}

RunConfig run_config_from_json(const std::string& text, const std::string& source,
                               const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(source + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw SchemaError(source + ": config must be a JSON object");
  }
  const std::string prefix = source + ": ";
  Section(&doc, source + ": config")
      .allow({"geometry", "encoder", "filter", "integrator", "sim", "noise", "plan",
              "calibration_profile", "output_dir"});

  RunConfig cfg;
  SimConfig& sim = cfg.sim;

  const Section geometry = Section::child(doc, "geometry", prefix);
  geometry.allow({"wheel_radius", "track_width", "max_wheel_speed_rpm"});
  sim.geometry.wheel_radius = geometry.number("wheel_radius", sim.geometry.wheel_radius);
  sim.geometry.track_width = geometry.number("track_width", sim.geometry.track_width);
  sim.geometry.max_wheel_speed = rpm_to_rad_s(
      geometry.number("max_wheel_speed_rpm", rad_s_to_rpm(sim.geometry.max_wheel_speed)));

  const Section encoder = Section::child(doc, "encoder", prefix);
  encoder.allow({"pulses_per_rev", "quadrature_multiplier", "transmission_ratio"});
  sim.encoder.pulses_per_rev = encoder.integer("pulses_per_rev", sim.encoder.pulses_per_rev);
  sim.encoder.quadrature_multiplier =
      encoder.integer("quadrature_multiplier", sim.encoder.quadrature_multiplier);
  sim.encoder.transmission_ratio =
      encoder.number("transmission_ratio", sim.encoder.transmission_ratio);

  const Section filter = Section::child(doc, "filter", prefix);
  filter.allow({"kind", "window", "alpha"});
  checked(source, [&] {
    sim.filter.kind = filter_kind_from_string(filter.string("kind", to_string(sim.filter.kind)));
  });
  sim.filter.window = filter.integer("window", sim.filter.window);
  sim.filter.alpha = filter.number("alpha", sim.filter.alpha);

  const Section integrator = Section::child(doc, "integrator", prefix);
  integrator.allow({"heading_mode"});
  const std::string mode = integrator.string("heading_mode", "start_of_step");
  if (mode == "midpoint") {
    sim.heading_mode = HeadingMode::kMidpoint;
  } else if (mode != "start_of_step") {
    throw SchemaError(integrator.where("heading_mode") + ": expected start_of_step or midpoint");
  }

  const Section simsec = Section::child(doc, "sim", prefix);
  simsec.allow({"dt", "sample_period"});
  sim.dt = simsec.number("dt", sim.dt);
  sim.sample_period = simsec.number("sample_period", sim.sample_period);
  sim.encoder.sample_period = sim.sample_period;

  const Section noise = Section::child(doc, "noise", prefix);
  noise.allow({"left_scale_error", "right_scale_error", "slip_noise_std", "seed"});
  sim.noise.left_scale_error = noise.number("left_scale_error", sim.noise.left_scale_error);
  sim.noise.right_scale_error = noise.number("right_scale_error", sim.noise.right_scale_error);
  sim.noise.slip_noise_std = noise.number("slip_noise_std", sim.noise.slip_noise_std);
  sim.noise.seed = noise.unsigned64("seed", sim.noise.seed);

  const Section plan = Section::child(doc, "plan", prefix);
  plan.allow({"square_side", "waypoints", "cruise_speed", "turn_rate", "final_heading",
              "final_turn", "align_to_sample_period"});
  const bool align = plan.boolean("align_to_sample_period", true);
  if (plan.has("square_side") && plan.has("waypoints")) {
    throw SchemaError(prefix + "plan: give only one of square_side or waypoints");
  }
  if (!plan.has("waypoints")) {
    if (plan.has("final_heading")) {
      throw SchemaError(plan.where("final_heading") + ": use final_turn with square_side");
    }
    SquareOptions opts;
    opts.cruise_speed = plan.number("cruise_speed", opts.cruise_speed);
    opts.turn_rate = plan.number("turn_rate", opts.turn_rate);
    opts.final_turn = plan.boolean("final_turn", opts.final_turn);
    opts.align_period = align ? sim.sample_period : 0.0;
    checked(source, [&] { cfg.plan = square_plan(plan.number("square_side", 6.0), opts); });
  } else {
    if (plan.has("final_turn")) {
      throw SchemaError(plan.where("final_turn") + ": use final_heading with waypoints");
    }
    const json& pts = plan.raw("waypoints");
    if (!pts.is_array()) {
      throw SchemaError(plan.where("waypoints") + ": expected an array of [x, y]");
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& p = pts[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw SchemaError(plan.where("waypoints") + "[" + std::to_string(i) +
                          "]: expected [x, y]");
      }
      cfg.plan.waypoints.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    cfg.plan.cruise_speed = plan.number("cruise_speed", cfg.plan.cruise_speed);
    cfg.plan.turn_rate = plan.number("turn_rate", cfg.plan.turn_rate);
    if (plan.has("final_heading") && !plan.raw("final_heading").is_null()) {
      cfg.plan.final_heading = plan.number("final_heading", 0.0);
    }
    cfg.plan.align_period = align ? sim.sample_period : 0.0;
  }

  const Section top(&doc, source);
  if (top.has("calibration_profile") && !doc.at("calibration_profile").is_null()) {
    cfg.profile_path = base_dir / top.string("calibration_profile", "");
  }
  if (top.has("output_dir") && !doc.at("output_dir").is_null()) {
    cfg.output_dir = base_dir / top.string("output_dir", "");
  }

  checked(source, [&] { cfg.validate(); });
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return run_config_from_json(ss.str(), path.string(), path.parent_path());
}

std::string run_config_to_json(const RunConfig& cfg) {
  const SimConfig& sim = cfg.sim;
  nlohmann::ordered_json doc;
  doc["geometry"] = {{"wheel_radius", sim.geometry.wheel_radius},
                     {"track_width", sim.geometry.track_width},
                     {"max_wheel_speed_rpm", rad_s_to_rpm(sim.geometry.max_wheel_speed)}};
  doc["encoder"] = {{"pulses_per_rev", sim.encoder.pulses_per_rev},
                    {"quadrature_multiplier", sim.encoder.quadrature_multiplier},
                    {"transmission_ratio", sim.encoder.transmission_ratio}};
  doc["filter"] = {{"kind", to_string(sim.filter.kind)},
                   {"window", sim.filter.window},
                   {"alpha", sim.filter.alpha}};
  doc["integrator"] = {{"heading_mode", heading_mode_name(sim.heading_mode)}};
  doc["sim"] = {{"dt", sim.dt}, {"sample_period", sim.sample_period}};
  doc["noise"] = {{"left_scale_error", sim.noise.left_scale_error},
                  {"right_scale_error", sim.noise.right_scale_error},
                  {"slip_noise_std", sim.noise.slip_noise_std},
                  {"seed", sim.noise.seed}};
  nlohmann::ordered_json waypoints = nlohmann::ordered_json::array();
  for (const auto& p : cfg.plan.waypoints) {
    waypoints.push_back({p.x, p.y});
  }
  doc["plan"] = {{"waypoints", waypoints},
                 {"cruise_speed", cfg.plan.cruise_speed},
                 {"turn_rate", cfg.plan.turn_rate},
                 {"final_heading", cfg.plan.final_heading ? nlohmann::ordered_json(*cfg.plan.final_heading)
                                                          : nlohmann::ordered_json(nullptr)},
                 {"align_to_sample_period", cfg.plan.align_period > 0.0}};
  doc["calibration_profile"] = cfg.profile_path ? nlohmann::ordered_json(cfg.profile_path->generic_string())
                                                : nlohmann::ordered_json(nullptr);
  return doc.dump(2) + "\n";
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace odokit
