#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "augtrack/cli.hpp"
#include "augtrack/json_io.hpp"
#include "augtrack/validation.hpp"

using namespace augtrack;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(AUGTRACK_TEST_TMPDIR) /
           ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("AUGTRACK_SEED");
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  static std::string read(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string spec_b() const {
    return write("b.json",
                 R"({"k_tgt": 2, "k_man": 0, "k_int": 1, "ts": 0.04, "omega": 2.5, "pole": 0.8, "q": 2})");
  }
  std::string spec_c() const {
    return write("c.json",
                 R"({"k_tgt": 2, "k_man": 1, "k_int": 1, "ts": 0.04, "omega": 2.5, "pole": 0.8, "q": 2})");
  }
  std::string spec_a() const { return write("a.json", R"({"tracking_index": 0.1, "q": 2, "omega": 2.5})"); }

  fs::path dir_;
};

}  // namespace

TEST(JsonIo, FormatRoundTrips) {
  for (real v : {0.1L, 1.0L / 3.0L, -2.5e-300L, 123456789.0L, 0.054L, 1.0L}) {
    const std::string s = format_real(v);
    EXPECT_EQ(std::strtold(s.c_str(), nullptr), v) << s;
  }
  EXPECT_EQ(format_real(1.0L), "1.0");
  EXPECT_EQ(format_real(std::numeric_limits<real>::quiet_NaN()), "null");
}

TEST(JsonIo, DesignRoundTripIsExact) {
  for (const auto& f : reference_filters()) {
    const auto text = dump_json(design_to_json(f));
    const auto back = design_from_json(parse_json(text, "test"), "");
    EXPECT_EQ(back.tf, f.tf) << f.name;
    EXPECT_EQ(back.realization.h, f.realization.h);
    EXPECT_EQ(back.spec, f.spec);
    EXPECT_EQ(back.name, f.name);
    EXPECT_EQ(dump_json(design_to_json(back)), text);
  }
}

TEST(JsonIo, SpecErrors) {
  EXPECT_THROW(spec_from_json(parse_json(R"({"k_tgt": 2})", "t")), ConfigError);
  EXPECT_THROW(spec_from_json(parse_json(
                   R"({"k_tgt": 2, "k_man": 1, "k_int": 1, "ts": 0.04, "pole": 0.8, "q": 2})", "t")),
               ConfigError);
  EXPECT_THROW(spec_from_json(parse_json(
                   R"({"k_tgt": 2, "k_man": 0, "k_int": 1, "ts": 0.04, "pole": 0.8, "q": 2, "bogus": 1})",
                   "t")),
               ConfigError);
  EXPECT_THROW(spec_from_json(parse_json(
                   R"({"k_tgt": 2.5, "k_man": 0, "k_int": 1, "ts": 0.04, "pole": 0.8, "q": 2})", "t")),
               ConfigError);
  try {
    parse_json("{\"k_tgt\": 2,, }", "spec.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("spec.json"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("column"), std::string::npos);
  }
}

TEST(JsonIo, ScenarioConfigDefaults) {
  const auto c = scenario_from_json(parse_json(R"({"id": 2})", "t"));
  EXPECT_EQ(c.sigma_sns, 0.0L);
  EXPECT_EQ(c.n_frames, 190);
  const auto c1 = scenario_from_json(parse_json(R"({"id": 1, "seed": 9, "n_frames": 50})", "t"));
  EXPECT_EQ(c1.seed, 9u);
  EXPECT_EQ(c1.n_frames, 50);
  EXPECT_THROW(scenario_from_json(parse_json(R"({"id": 1, "seed": -1})", "t")), ConfigError);
}

TEST_F(CliTest, DesignWritesJson) {
  const auto r = cli({"design", spec_b(), "-o", path("out.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("b = [0.0460, 0.0040, -0.0420, 0.0000]"), std::string::npos) << r.out;
  const auto j = read_json_file(path("out.json"));
  EXPECT_EQ(j["K"].get<int>(), 3);
  const Vector b = j["b"].get<Vector>();
  EXPECT_NEAR(double(b[0]), 0.046, 5e-4);
  EXPECT_NEAR(double(b[2]), -0.042, 5e-4);
  for (const char* key : {"K", "b", "a", "gain_kin", "g_obs_kin", "c_obs_kin", "spec"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST_F(CliTest, DesignFilterCDenominator) {
  const auto r = cli({"design", spec_c()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse_json(r.out, "stdout");
  const Vector a = j["a"].get<Vector>();
  const Vector want{1, -4, 6.4, -5.12, 2.048, -0.32768};
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(double(a[k]), double(want[k]), 1e-12);
}

TEST_F(CliTest, DesignRejectsMalformedJson) {
  const auto bad = write("bad.json", "{\"k_tgt\": 2, \"k_man\": ");
  const auto r = cli({"design", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.json"), std::string::npos);
  EXPECT_NE(r.err.find("column"), std::string::npos) << r.err;
}

TEST_F(CliTest, DesignRejectsInvalidSpec) {
  const auto bad = write("p.json", R"({"k_tgt": 2, "k_man": 0, "k_int": 1, "ts": 0.04, "pole": 1.2, "q": 2})");
  EXPECT_EQ(cli({"design", bad}).code, 2);
  EXPECT_EQ(cli({"design", path("missing.json")}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
}

TEST_F(CliTest, AnalyzeWritesMetricsAndCsv) {
  ASSERT_EQ(cli({"design", spec_a(), "-o", path("A.json")}).code, 0);
  const auto r = cli({"analyze", path("A.json"), "--grid", "8", "-o", path("A")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = read_json_file(path("A_metrics.json"));
  EXPECT_NEAR(double(m["wng_db"].get<real>()), -8.081, 5e-3);
  EXPECT_TRUE(m["flatness_pass"].get<bool>());
  std::istringstream csv(read(path("A_response.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "f,omega,mag,mag_db,phase_rad,phase_err_rad");
  int rows = 0;
  std::string last;
  while (std::getline(csv, line)) {
    if (rows == 0) EXPECT_EQ(line.substr(0, 4), "0.0,");
    last = line;
    ++rows;
  }
  EXPECT_EQ(rows, 8);
  EXPECT_EQ(last.substr(0, 4), "0.5,");
}

TEST_F(CliTest, AnalyzeFilterB09Angle) {
  const auto spec =
      write("b9.json", R"({"k_tgt": 2, "k_man": 0, "k_int": 1, "ts": 0.04, "omega": 2.5, "pole": 0.9, "q": 2})");
  ASSERT_EQ(cli({"analyze", spec, "-o", path("b9")}).code, 0);
  const auto m = read_json_file(path("b9_metrics.json"));
  EXPECT_NEAR(double(m["eps_theta_deg"].get<real>()), -47.36, 5e-3);
}

TEST_F(CliTest, AnalyzeRoundTripMatchesDirectSpec) {
  ASSERT_EQ(cli({"design", spec_c(), "-o", path("C.json")}).code, 0);
  ASSERT_EQ(cli({"analyze", path("C.json"), "-o", path("from_design")}).code, 0);
  ASSERT_EQ(cli({"analyze", spec_c(), "-o", path("from_spec")}).code, 0);
  EXPECT_EQ(read(path("from_design_metrics.json")), read(path("from_spec_metrics.json")));
  EXPECT_EQ(read(path("from_design_response.csv")), read(path("from_spec_response.csv")));
}

TEST_F(CliTest, AnalyzeRejectsBadFlags) {
  EXPECT_EQ(cli({"analyze", spec_b(), "--grid", "0", "-o", path("x")}).code, 2);
  EXPECT_EQ(cli({"analyze", spec_b(), "--omega-man", "7", "-o", path("x")}).code, 2);
  EXPECT_EQ(cli({"analyze", spec_b(), "--sigma-sns", "abc", "-o", path("x")}).code, 2);
}

TEST_F(CliTest, SimulateCircleFilterC) {
  const auto r = cli({"simulate", "--scenario", "2", "--reps", "1", "--filter", spec_c()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse_json(r.out, "stdout");
  EXPECT_LE(double(j["filters"][0]["terminal"]["dist"].get<real>()), 2e-3);
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const std::vector<std::string> args{"simulate", "--scenario", "1", "--reps", "1", "--seed", "7",
                                      "--filter", spec_b(), "--filter", spec_a()};
  const auto r1 = cli(args);
  const auto r2 = cli(args);
  ASSERT_EQ(r1.code, 0) << r1.err;
  EXPECT_EQ(r1.out, r2.out);
  auto other = args;
  other[6] = "8";
  EXPECT_NE(cli(other).out, r1.out);
}

TEST_F(CliTest, SimulateSeedFromEnvironment) {
  const std::vector<std::string> args{"simulate", "--scenario", "3", "--reps", "2",
                                      "--seed", "1", "--filter", spec_b()};
  const auto base = cli({"simulate", "--scenario", "3", "--reps", "2", "--seed", "5", "--filter", spec_b()});
  setenv("AUGTRACK_SEED", "5", 1);
  EXPECT_EQ(cli(args).out, base.out);
  setenv("AUGTRACK_SEED", "five", 1);
  EXPECT_EQ(cli(args).code, 2);
  unsetenv("AUGTRACK_SEED");
}

TEST_F(CliTest, SimulateFramesCsv) {
  const auto r = cli({"simulate", "--scenario", "3", "--reps", "1", "--frames", "12", "--filter",
                      spec_b(), "--filter", spec_a(), "--frames-csv", path("frames.csv"), "-o",
                      path("stats.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"frames_b.csv", "frames_a.csv"}) {
    std::istringstream csv(read(path(name)));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "n,truth_x,truth_y,meas_x,meas_y,est_x,est_y");
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    EXPECT_EQ(rows, 12) << name;
  }
  const auto j = read_json_file(path("stats.json"));
  EXPECT_EQ(j["filters"].size(), 2u);
  EXPECT_EQ(j["scenario"]["n_frames"].get<int>(), 12);
}

TEST_F(CliTest, SimulateUsageErrors) {
  EXPECT_EQ(cli({"simulate", "--scenario", "4", "--filter", spec_b()}).code, 2);
  EXPECT_EQ(cli({"simulate", "--scenario", "3"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--filter", spec_b()}).code, 2);
  const auto cfg = write("cfg.json", R"({"id": 7})");
  EXPECT_EQ(cli({"simulate", "--config", cfg, "--filter", spec_b()}).code, 2);
}

TEST_F(CliTest, SimulateFromConfig) {
  const auto cfg = write("cfg.json", R"({"id": 2, "n_frames": 60})");
  const auto r = cli({"simulate", "--config", cfg, "--reps", "1", "--filter", spec_b()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse_json(r.out, "o")["scenario"]["n_frames"].get<int>(), 60);
}

TEST_F(CliTest, ValidatePassesAndPerturbFails) {
  const auto ok = cli({"validate"});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("checks passed"), std::string::npos);
  EXPECT_EQ(ok.out.find("FAIL"), std::string::npos);
  const auto bad = cli({"validate", "--perturb", "0.01"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("FAIL"), std::string::npos);
}
