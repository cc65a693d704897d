#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "odokit/csv_io.hpp"
#include "odokit/errors.hpp"
#include "odokit/profile_io.hpp"
#include "odokit/run_config.hpp"

namespace fs = std::filesystem;

namespace odokit {
namespace {

TEST(FormatDouble, RoundTripsExactly) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 5000; ++i) {
    const double v = u(rng) * std::pow(10.0, double(int(i % 21) - 10));
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(EncoderLog, RoundTrip) {
  const std::vector<EncoderSample> log = {{0, 0, 0}, {1000, -5, 1234567890123}, {2000, 7, -8}};
  std::stringstream ss;
  write_encoder_log(ss, log);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), kEncoderLogHeader);
  const auto back = parse_encoder_log(ss, "mem");
  ASSERT_EQ(back.size(), log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    EXPECT_EQ(back[i].t_ms, log[i].t_ms);
    EXPECT_EQ(back[i].left_count, log[i].left_count);
    EXPECT_EQ(back[i].right_count, log[i].right_count);
  }
}

TEST(EncoderLog, SchemaErrors) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_encoder_log(in, "log.csv");
  };
  EXPECT_THROW(parse("t_s,x_m,y_m,theta_rad\n0,0,0,0\n"), SchemaError);
  EXPECT_THROW(parse("t_ms,left_count,right_count\n0,1.5,0\n"), SchemaError);
  EXPECT_THROW(parse("t_ms,left_count,right_count\n0,1\n"), SchemaError);
  EXPECT_THROW(parse("t_ms,left_count,right_count\n-1,0,0\n"), SchemaError);
  EXPECT_THROW(parse("t_ms,left_count,right_count\n5,0,0\n5,0,0\n"), SchemaError);
  try {
    parse("t_ms,left_count,right_count\n0,0,0\n1000,x,0\n");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("log.csv:3"), std::string::npos) << e.what();
  }
}

TEST(Trajectory, RoundTripIsBitExact) {
  Trajectory t;
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) t.samples.push_back({i * 0.1, {u(rng), u(rng), u(rng) / 4.0}});
  std::stringstream ss;
  write_trajectory(ss, t);
  EXPECT_EQ(parse_trajectory(ss, "mem"), t);
}

TEST(Csv, MissingColumnNamed) {
  std::istringstream in("a,b\n1,2\n");
  const CsvTable table = parse_csv(in, "x.csv");
  EXPECT_EQ(table.column("b"), 1u);
  try {
    table.column("c");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find('c'), std::string::npos);
  }
  EXPECT_THROW(read_csv("/nonexistent/file.csv"), IoError);
}

CalibrationProfile sample_profile() {
  CalibrationProfile p;
  p.rpm_table_left.anchors = {{33, 33}, {142, 137}};
  p.rpm_table_right.anchors = {{33, 33}, {141, 137}};
  p.balance = {1.01, 0.99};
  p.heading.gain = 90.0 / 28.0;
  p.metadata = {{"note", "unit test"}};
  return p;
}

TEST(Profile, JsonRoundTrip) {
  const CalibrationProfile p = sample_profile();
  EXPECT_EQ(profile_from_json(profile_to_json(p), "mem"), p);
  EXPECT_EQ(profile_from_json(profile_to_json(CalibrationProfile{}), "mem"), CalibrationProfile{});
}

TEST(Profile, RejectsUnknownAndMissingFields) {
  auto doc = [](const std::string& extra) {
    return std::string(R"({"rpm_table_left": [], "rpm_table_right": [],
      "balance": {"left_scale": 1, "right_scale": 1}, "heading_gain": 1, "metadata": {})") +
           extra + "}";
  };
  EXPECT_NO_THROW(profile_from_json(doc(""), "p.json"));
  EXPECT_THROW(profile_from_json(doc(R"(, "bogus": 1)"), "p.json"), SchemaError);
  EXPECT_THROW(profile_from_json(R"({"rpm_table_left": []})", "p.json"), SchemaError);
  EXPECT_THROW(profile_from_json("not json", "p.json"), SchemaError);
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("odokit_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

using ProfileFile = TempDir;

TEST_F(ProfileFile, AtomicSaveLeavesNoTemporary) {
  const fs::path path = dir_ / "profile.json";
  save_profile_atomic(sample_profile(), path);
  EXPECT_EQ(load_profile(path), sample_profile());
  EXPECT_FALSE(fs::exists(dir_ / "profile.json.tmp"));
  EXPECT_THROW(load_profile(dir_ / "missing.json"), IoError);
}

TEST(RunConfigParse, Defaults) {
  const RunConfig c = run_config_from_json("{}", "mem");
  EXPECT_EQ(c.sim.geometry.wheel_radius, 0.15);
  EXPECT_EQ(c.sim.geometry.track_width, 0.56);
  EXPECT_EQ(c.sim.filter.kind, FilterKind::kMovingAverage);
  EXPECT_EQ(c.plan.waypoints.size(), 5u);
  EXPECT_EQ(c.plan.align_period, 1.0);
  EXPECT_FALSE(c.profile_path.has_value());
}

TEST(RunConfigParse, ErrorsNameTheField) {
  try {
    run_config_from_json(R"({"noise": {"sead": 1}})", "cfg.json");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("noise.sead"), std::string::npos) << e.what();
  }
  EXPECT_THROW(run_config_from_json(R"({"geometry": {"wheel_radius": "big"}})", "c"), SchemaError);
  EXPECT_THROW(run_config_from_json(R"({"plan": {"square_side": 6, "waypoints": []}})", "c"),
               SchemaError);
  EXPECT_THROW(run_config_from_json(R"({"geometry": {"track_width": -1}})", "c"), ConfigError);
  EXPECT_THROW(run_config_from_json(R"({"plan": {"square_side": -2}})", "c"), PlanError);
  EXPECT_THROW(run_config_from_json(R"({"filter": {"kind": "median"}})", "c"), ConfigError);
}

TEST(RunConfigParse, ResolvedJsonReparsesToSameHash) {
  const RunConfig a = run_config_from_json(R"({"noise": {"seed": 9}, "plan": {"square_side": 3}})",
                                           "c");
  const std::string text = run_config_to_json(a);
  const RunConfig b = run_config_from_json(text, "resolved");
  EXPECT_EQ(run_config_to_json(b), text);
  EXPECT_EQ(fnv1a_hex(text).size(), 16u);
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Data, ShippedConfigsLoad) {
  EXPECT_NO_THROW(load_run_config(fs::path(ODOKIT_DATA_DIR) / "square6.json"));
  EXPECT_NO_THROW(load_run_config(fs::path(ODOKIT_DATA_DIR) / "square6_faulty.json"));
}

}  // namespace
}  // namespace odokit
