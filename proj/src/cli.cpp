#include "odokit/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "odokit/calibration.hpp"
#include "odokit/csv_io.hpp"
#include "odokit/errors.hpp"
#include "odokit/evaluation.hpp"
#include "odokit/odometry.hpp"
#include "odokit/profile_io.hpp"
#include "odokit/run_config.hpp"
#include "odokit/simulator.hpp"

namespace odokit {

namespace fs = std::filesystem;

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  std::string s(buf);
  return s == "-0" ? "0" : s;
}

std::string endpoint_line(const PositionError& e) {
  return short_number(e.dx) + " " + short_number(e.dy) + " " + short_number(e.norm);
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

std::string encoder_log_text(std::span<const EncoderSample> log) {
  std::ostringstream ss;
  write_encoder_log(ss, log);
  return ss.str();
}

std::string trajectory_text(const Trajectory& traj) {
  std::ostringstream ss;
  write_trajectory(ss, traj);
  return ss.str();
}

// ODOKIT_SEED replaces the configured seed when set.
void apply_seed_override(RunConfig& cfg) {
  const char* env = std::getenv("ODOKIT_SEED");
  if (env == nullptr || *env == '\0') {
    return;
  }
  std::uint64_t seed = 0;
  const char* end = env + std::char_traits<char>::length(env);
  auto [ptr, ec] = std::from_chars(env, end, seed);
  if (ec != std::errc() || ptr != end) {
    throw UsageError(std::string("ODOKIT_SEED is not an unsigned integer: '") + env + "'");
  }
  cfg.sim.noise.seed = seed;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  RunConfig cfg = load_run_config(args.config);
  apply_seed_override(cfg);
  fs::path out_dir;
  if (!args.out.empty()) {
    out_dir = args.out;
  } else if (cfg.output_dir) {
    out_dir = *cfg.output_dir;
  } else {
    throw UsageError("simulate: give --out or set output_dir in the config");
  }

  CalibrationProfile profile;
  std::string profile_hash = "identity";
  if (cfg.profile_path) {
    profile = load_profile(*cfg.profile_path);
    profile_hash = fnv1a_hex(profile_to_json(profile));
  }

  const ExperimentResult run = run_experiment(cfg.sim, cfg.plan, profile);
  const ErrorReport report = make_report(run.estimate, run.truth, run.waypoint_times);

  ensure_directory(out_dir);
  write_text_file(out_dir / "truth.csv", trajectory_text(run.truth));
  write_text_file(out_dir / "encoder_log.csv", encoder_log_text(run.log));
  write_text_file(out_dir / "estimate.csv", trajectory_text(run.estimate));
  write_text_file(out_dir / "report.json", report_to_json(report));
  render_paths(run.estimate, run.truth, out_dir / "paths.svg");

  const std::string resolved = run_config_to_json(cfg);
  nlohmann::ordered_json manifest;
  manifest["tool"] = "odokit";
  manifest["version"] = kToolVersion;
  manifest["config_hash"] = fnv1a_hex(resolved);
  manifest["seed"] = cfg.sim.noise.seed;
  manifest["speed_filter"] = {{"kind", to_string(cfg.sim.filter.kind)},
                              {"window", cfg.sim.filter.window},
                              {"alpha", cfg.sim.filter.alpha}};
  manifest["calibration_profile_hash"] = profile_hash;
  manifest["pipeline"] = "rpm_correction -> balance -> kinematics -> heading_gain";
  manifest["artifacts"] = {"truth.csv", "encoder_log.csv", "estimate.csv", "report.json",
                           "paths.svg"};
  manifest["config"] = nlohmann::ordered_json::parse(resolved);
  write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

  out << endpoint_line({report.endpoint_error_x, report.endpoint_error_y,
                        report.endpoint_error_norm})
      << "\n";
  return kExitOk;
}

// --- calibrate -------------------------------------------------------------

struct CalibrateArgs {
  std::string kind;
  std::string input;
  std::string profile;
  std::optional<double> actual_deg;
};

int cmd_calibrate(const CalibrateArgs& args, std::ostream& out) {
  const fs::path profile_path = args.profile;
  CalibrationProfile profile;
  if (fs::exists(profile_path)) {
    profile = load_profile(profile_path);
  }
  const CsvTable table = read_csv(args.input);
  const std::string source = args.input;
  const std::string input_name = fs::path(args.input).filename().string();
  if (table.rows.empty()) {
    throw SchemaError(source + ": no data rows");
  }
  const auto col = [&](const std::string& name) {
    try {
      return table.column(name);
    } catch (const SchemaError&) {
      throw SchemaError(source + ": missing column '" + name + "'");
    }
  };
  const auto value = [&](const CsvTable::Row& row, std::size_t c) {
    return parse_double(row.fields[c], source, row.line);
  };

  if (args.kind == "rpm") {
    const std::size_t left = col("encoder_rpm_left");
    const std::size_t right = col("encoder_rpm_right");
    const std::size_t tach = col("tachometer_rpm");
    std::vector<TachometerReading> readings;
    for (const auto& row : table.rows) {
      readings.push_back({value(row, tach), value(row, left), value(row, right)});
    }
    const RpmTables tables = fit_rpm_tables(readings);
    profile.rpm_table_left = tables.left;
    profile.rpm_table_right = tables.right;
    profile.metadata["rpm"] =
        "fit from " + input_name + " (" + std::to_string(readings.size()) + " tachometer rows)";
    out << "rpm tables: " << tables.left.anchors.size() << " anchors per wheel\n";
  } else if (args.kind == "balance") {
    const std::size_t left = col("left_rad_s");
    const std::size_t right = col("right_rad_s");
    std::vector<WheelSpeedPair> pairs;
    for (const auto& row : table.rows) {
      pairs.push_back({value(row, left), value(row, right)});
    }
    profile.balance = fit_wheel_balance(pairs);
    profile.metadata["balance"] =
        "fit from " + input_name + " (" + std::to_string(pairs.size()) + " speed pairs)";
    out << "balance: left_scale=" << format_double(profile.balance.left_scale)
        << " right_scale=" << format_double(profile.balance.right_scale) << "\n";
  } else {
    if (!args.actual_deg) {
      throw UsageError("calibrate --kind heading requires --actual-deg");
    }
    const std::size_t raw = col("raw_deg");
    std::vector<double> estimates;
    for (const auto& row : table.rows) {
      estimates.push_back(value(row, raw));
    }
    profile.heading = fit_heading_gain(estimates, *args.actual_deg);
    profile.metadata["heading"] = "fit from " + input_name + " (" +
                                  std::to_string(estimates.size()) + " trials, actual " +
                                  format_double(*args.actual_deg) + " deg)";
    out << "heading_gain: " << format_double(profile.heading.gain) << "\n";
  }

  save_profile_atomic(profile, profile_path);
  return kExitOk;
}

// --- replay ----------------------------------------------------------------

struct ReplayArgs {
  std::string log;
  std::string config;
  std::string profile;
  std::string out;
  std::vector<double> start;
};

int cmd_replay(const ReplayArgs& args, std::ostream& out) {
  OdometrySettings settings;
  CalibrationProfile profile;
  if (!args.config.empty()) {
    const RunConfig cfg = load_run_config(args.config);
    settings = cfg.sim.odometry_settings();
    if (cfg.profile_path && args.profile.empty()) {
      profile = load_profile(*cfg.profile_path);
    }
  }
  if (!args.profile.empty()) {
    profile = load_profile(args.profile);
  }
  Pose2D start;
  if (!args.start.empty()) {
    start = {args.start[0], args.start[1], args.start[2]};
  }
  const std::vector<EncoderSample> log = read_encoder_log(args.log);
  if (log.empty()) {
    throw SchemaError(args.log + ": no data rows");
  }
  const Trajectory estimate = estimate_trajectory(log, settings, profile, start);
  write_text_file(args.out, trajectory_text(estimate));
  const Pose2D& end = estimate.back().pose;
  out << format_double(end.x) << " " << format_double(end.y) << " " << format_double(end.theta)
      << "\n";
  return kExitOk;
}

// --- evaluate / plot -------------------------------------------------------

struct CompareArgs {
  std::string estimate;
  std::string truth;
  std::string out;
  std::vector<double> waypoint_times;
};

int cmd_evaluate(const CompareArgs& args, std::ostream& out) {
  const Trajectory estimate = read_trajectory(args.estimate);
  const Trajectory truth = read_trajectory(args.truth);
  if (estimate.empty() || truth.empty()) {
    throw SchemaError("evaluate: trajectories must have at least one row");
  }
  std::vector<double> times = args.waypoint_times;
  if (times.empty()) {
    // Every truth timestamp the estimate also covers.
    for (const auto& s : truth.samples) {
      if (s.t >= estimate.front().t && s.t <= estimate.back().t) {
        times.push_back(s.t);
      }
    }
  }
  const ErrorReport report = make_report(estimate, truth, times);
  if (!args.out.empty()) {
    write_text_file(args.out, report_to_json(report));
  }
  out << endpoint_line({report.endpoint_error_x, report.endpoint_error_y,
                        report.endpoint_error_norm})
      << "\n";
  return kExitOk;
}

int cmd_plot(const CompareArgs& args, std::ostream& out) {
  const Trajectory estimate = read_trajectory(args.estimate);
  const Trajectory truth = read_trajectory(args.truth);
  if (estimate.empty() || truth.empty()) {
    throw SchemaError("plot: trajectories must have at least one row");
  }
  render_paths(estimate, truth, args.out);
  out << args.out << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wheel odometry toolkit for differential-drive vehicles", "odokit"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Run the square-path experiment from a config");
  simulate->add_option("--config", sim_args.config, "Run config (JSON)")->required();
  simulate->add_option("--out", sim_args.out, "Output directory");

  CalibrateArgs cal_args;
  auto* calibrate = app.add_subcommand("calibrate", "Fit one calibration stage into a profile");
  calibrate->add_option("--kind", cal_args.kind, "rpm, balance or heading")
      ->required()
      ->check(CLI::IsMember({"rpm", "balance", "heading"}));
  calibrate->add_option("--input", cal_args.input, "Calibration data (CSV)")->required();
  calibrate->add_option("--profile", cal_args.profile, "Profile to update (JSON)")->required();
  calibrate->add_option("--actual-deg", cal_args.actual_deg, "True turn angle for --kind heading");

  ReplayArgs replay_args;
  auto* replay = app.add_subcommand("replay", "Dead-reckon a trajectory from an encoder log");
  replay->add_option("--log", replay_args.log, "Encoder log (CSV)")->required();
  replay->add_option("--config", replay_args.config, "Run config for geometry/encoder/filter");
  replay->add_option("--profile", replay_args.profile, "Calibration profile (JSON)");
  replay->add_option("--out", replay_args.out, "Estimated trajectory (CSV)")->required();
  replay->add_option("--start", replay_args.start, "Start pose: x y theta")->expected(3);

  CompareArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Endpoint and waypoint errors");
  evaluate->add_option("--estimate", eval_args.estimate, "Estimated trajectory (CSV)")->required();
  evaluate->add_option("--truth", eval_args.truth, "True trajectory (CSV)")->required();
  evaluate->add_option("--out", eval_args.out, "Error report (JSON)");
  evaluate->add_option("--waypoint-times", eval_args.waypoint_times, "Waypoint times, s")
      ->delimiter(',');

  CompareArgs plot_args;
  auto* plot = app.add_subcommand("plot", "Overlay estimated and true paths as SVG");
  plot->add_option("--estimate", plot_args.estimate, "Estimated trajectory (CSV)")->required();
  plot->add_option("--truth", plot_args.truth, "True trajectory (CSV)")->required();
  plot->add_option("--out", plot_args.out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim_args, out);
    if (*calibrate) return cmd_calibrate(cal_args, out);
    if (*replay) return cmd_replay(replay_args, out);
    if (*evaluate) return cmd_evaluate(eval_args, out);
    if (*plot) return cmd_plot(plot_args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace odokit
