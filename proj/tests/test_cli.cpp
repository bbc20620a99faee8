#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "adhesion/cli.hpp"
#include "adhesion/closed_form.hpp"
#include "adhesion/errors.hpp"

using namespace adhesion;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "adhesion");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    rows.push_back(row);
  }
  return rows;
}

// Temporary file removed when the test ends.
class TempFile {
 public:
  TempFile(const std::string& name, const std::string& contents)
      : path_(std::filesystem::temp_directory_path() /
              ("adhesion_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
               "_" + name)) {
    std::ofstream(path_) << contents;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

std::string case_two_samples() {
  const Scenario s(0.0027, 10.0, power_law(0.000348, 1.0));
  std::string text = "t,m\n";
  for (int i = 1; i <= 10; ++i) {
    text += cli::format_number(0.5 * i) + "," + cli::format_number(mass_at_time_closed(s, 0.5 * i)) + "\n";
  }
  return text;
}

}  // namespace

TEST(CliFormatNumber, RoundTripsAtFullPrecision) {
  for (double v : {0.1, 1.0 / 3.0, 0.0027, 6.02214076e23, 5e-324, -2.5, 0.0}) {
    const std::string s = cli::format_number(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, v) << s;
  }
  EXPECT_EQ(cli::format_number(0.0027), "0.0027000000000000001");
  EXPECT_EQ(cli::format_number(1.0), "1");
}

TEST(CliSimulate, WaterDoublesNearFiveSeconds) {
  const auto r = run_cli({"simulate", "--preset", "table_tennis_water", "--v0", "1", "--t-end", "4.94",
                          "--samples", "3", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, 8), "t,x,m,v\n");
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows.back()[2], 0.0054, 1e-5);
}

TEST(CliSimulate, AtRestNothingHappens) {
  const auto r = run_cli({"simulate", "--m0", "1", "--lambda", "1", "--alpha", "1", "--v0", "0", "--t-end", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_FALSE(rows.empty());
  for (const auto& row : rows) {
    EXPECT_EQ(row[1], 0.0);
    EXPECT_EQ(row[2], 1.0);
  }
}

TEST(CliSimulate, OdeMatchesClosedForm) {
  const std::vector<std::string> base{"simulate", "--preset", "table_tennis_air", "--v0", "10", "--t-end", "1"};
  auto ode_args = base;
  ode_args.insert(ode_args.end(), {"--method", "ode"});
  auto closed_args = base;
  closed_args.insert(closed_args.end(), {"--method", "closed"});
  const auto ode = run_cli(ode_args);
  const auto closed = run_cli(closed_args);
  ASSERT_EQ(ode.code, 0) << ode.err;
  ASSERT_EQ(closed.code, 0) << closed.err;
  const auto a = csv_rows(ode.out);
  const auto b = csv_rows(closed.out);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_NEAR(a[i][k], b[i][k], 1e-6 * std::max(std::abs(b[i][k]), 1e-300)) << i << "," << k;
    }
  }
}

TEST(CliSimulate, ImplicitPositionGrid) {
  const auto r = run_cli({"simulate", "--preset", "table_tennis_water", "--v0", "1", "--x-end", "5",
                          "--samples", "6", "--method", "implicit"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_DOUBLE_EQ(rows.back()[1], 5.0);
}

TEST(CliSimulate, Deterministic) {
  const std::vector<std::string> args{"simulate", "--preset", "table_tennis_air", "--v0", "10",
                                      "--t-end", "2", "--method", "ode", "--format", "json"};
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
}

TEST(CliSimulate, JsonLayout) {
  const auto r = run_cli({"simulate", "--preset", "table_tennis_air", "--v0", "10", "--t-end", "1",
                          "--samples", "4", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["method"], "closed_form");
  EXPECT_EQ(doc["states"].size(), 4u);
  EXPECT_DOUBLE_EQ(doc["states"][0]["m"].get<double>(), 0.0027);
  EXPECT_DOUBLE_EQ(doc["scenario"]["v0"].get<double>(), 10.0);
}

TEST(CliSimulate, OutputFile) {
  const TempFile file("series.csv", "");
  const auto r = run_cli({"simulate", "--preset", "table_tennis_air", "--v0", "10", "--t-end", "1",
                          "--output", file.path()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(file.path());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,x,m,v");
}

TEST(CliSimulate, ConfigFileWithFlagOverride) {
  const TempFile config("run.json",
                        R"({"preset": "table_tennis_water", "v0": 1, "t_end": 4.94, "samples": 3})");
  const auto from_file = run_cli({"simulate", "--config", config.path()});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(csv_rows(from_file.out).size(), 3u);
  const auto overridden = run_cli({"simulate", "--config", config.path(), "--samples", "5"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_EQ(csv_rows(overridden.out).size(), 5u);
}

TEST(CliSimulate, InputErrorsExitTwo) {
  const TempFile bad_key("bad.json", R"({"preset": "table_tennis_water", "velocity": 1})");
  const std::vector<std::vector<std::string>> cases{
      {"simulate", "--preset", "table_tennis_mud", "--v0", "1", "--t-end", "1"},
      {"simulate", "--v0", "1", "--t-end", "1"},
      {"simulate", "--preset", "table_tennis_air", "--m0", "1", "--lambda", "1", "--alpha", "1",
       "--v0", "1", "--t-end", "1"},
      {"simulate", "--preset", "table_tennis_air", "--t-end", "1"},
      {"simulate", "--preset", "table_tennis_air", "--v0", "1", "--t-end", "1", "--x-end", "1"},
      {"simulate", "--preset", "table_tennis_air", "--v0", "1", "--t-end", "1", "--samples", "1"},
      {"simulate", "--preset", "table_tennis_air", "--v0", "1", "--t-end", "-1"},
      {"simulate", "--preset", "table_tennis_air", "--v0", "1", "--t-end", "1", "--method", "euler"},
      {"simulate", "--m0", "1", "--lambda", "-1", "--alpha", "1", "--v0", "1", "--t-end", "1"},
      {"simulate", "--preset", "table_tennis_water", "--v0", "1", "--x-end", "100"},
      {"simulate", "--config", bad_key.path(), "--t-end", "1"},
      {"simulate", "--config", "/nonexistent/run.json"},
      {"bogus"},
  };
  for (const auto& args : cases) {
    const auto r = run_cli(args);
    EXPECT_EQ(r.code, 2) << args[1];
    EXPECT_FALSE(r.err.empty());
  }
}

TEST(CliMetrics, WaterPreset) {
  const auto r = run_cli({"metrics", "--preset", "table_tennis_water", "--v0", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["doubling_time"].get<double>(), 4.94, 0.005);
  EXPECT_NEAR(doc["max_range"].get<double>(), 7.126, 0.001);
  EXPECT_NEAR(doc["doubling_distance"].get<double>(), 0.5 * doc["max_range"].get<double>(), 1e-12);
}

TEST(CliMetrics, AirRangeIsInfinite) {
  for (const char* v0 : {"1", "10", "37.5"}) {
    const auto r = run_cli({"metrics", "--preset", "table_tennis_air", "--v0", v0});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["max_range"], "infinite");
    EXPECT_NEAR(doc["doubling_distance"].get<double>(), 5.3779, 1e-4);
  }
}

TEST(CliMetrics, KeyOrder) {
  const auto r = run_cli({"metrics", "--preset", "table_tennis_air", "--v0", "10"});
  const auto t = r.out.find("doubling_time");
  const auto d = r.out.find("doubling_distance");
  const auto m = r.out.find("max_range");
  EXPECT_LT(t, d);
  EXPECT_LT(d, m);
}

TEST(CliCompare, WaterDefaultsPass) {
  const auto r = run_cli({"compare", "--preset", "table_tennis_water", "--v0", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc["pass"].get<bool>());
  for (const char* key : {"closed_vs_implicit", "closed_vs_ode", "implicit_vs_ode"}) {
    EXPECT_LE(doc[key].get<double>(), 1e-6) << key;
  }
}

TEST(CliCompare, UnattainableThresholdFails) {
  const auto r = run_cli({"compare", "--preset", "table_tennis_water", "--v0", "1", "--threshold", "1e-20"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(nlohmann::json::parse(r.out)["pass"].get<bool>());
}

TEST(CliCompare, AirToTenSeconds) {
  EXPECT_EQ(run_cli({"compare", "--preset", "table_tennis_air", "--v0", "10", "--t-end", "10"}).code, 0);
}

TEST(CliFit, RecoversCaseTwo) {
  const TempFile data("case2.csv", case_two_samples());
  const auto r = run_cli({"fit", "--data", data.path(), "--m0", "0.0027", "--v0", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc["lambda"].get<double>() / 0.000348, 1.0, 1e-6);
  EXPECT_NEAR(doc["alpha"].get<double>(), 1.0, 1e-6);
  EXPECT_TRUE(doc["converged"].get<bool>());
}

TEST(CliFit, TooFewRows) {
  const TempFile data("two.csv", "t,m\n1,0.003\n2,0.004\n");
  const auto r = run_cli({"fit", "--data", data.path(), "--m0", "0.0027", "--v0", "10"});
  EXPECT_EQ(r.code, 2);
}

TEST(CliFit, ConstantMassIsUnidentifiable) {
  const TempFile data("flat.csv", "t,m\n1,0.0027\n2,0.0027\n3,0.0027\n4,0.0027\n");
  const auto r = run_cli({"fit", "--data", data.path(), "--m0", "0.0027", "--v0", "10"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unidentifiable"), std::string::npos) << r.err;
}

TEST(CliFit, MalformedFileNamesTheLine) {
  const TempFile data("bad.csv", "t,m\n1,0.003\n2,oops\n3,0.005\n");
  const auto r = run_cli({"fit", "--data", data.path(), "--m0", "0.0027", "--v0", "10"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST(CliSampleCsv, AxisFromHeader) {
  std::istringstream t("t,m\n1,2\n");
  EXPECT_EQ(cli::parse_sample_csv(t).axis, SampleAxis::time);
  std::istringstream x("x,m\n1,2\n3,4\n");
  const auto file = cli::parse_sample_csv(x);
  EXPECT_EQ(file.axis, SampleAxis::position);
  ASSERT_EQ(file.samples.size(), 2u);
  EXPECT_EQ(file.samples[1].independent, 3.0);
  EXPECT_EQ(file.samples[1].mass, 4.0);
}

TEST(CliSampleCsv, BadHeaderAndRows) {
  for (const char* text : {"v,m\n1,2\n", "t,m\n1,2,3\n", "t,m\n1\n", "", "t,m\n1,2x\n"}) {
    std::istringstream is(text);
    EXPECT_THROW(cli::parse_sample_csv(is), Error) << text;
  }
}
