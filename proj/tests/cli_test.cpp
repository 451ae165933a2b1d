#include "bankdyn/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bankdyn/csv.hpp"
#include "bankdyn/svg.hpp"

using namespace bankdyn;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string str() const { return path_.string(); }
  fs::path path() const { return path_; }

 private:
  fs::path path_;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string first_data_row(const std::string& csv) {
  const auto header_end = csv.find('\n');
  const auto row_end = csv.find('\n', header_end + 1);
  return csv.substr(header_end + 1, row_end - header_end - 1);
}

TEST(Csv, HeaderAndSingleSampleRow) {
  ModelParams p;
  RateSet r;
  RegulationParams reg;
  Trajectory traj;
  traj.samples.push_back({0.0, 10.0, 20.0});
  const DerivedSeries derived = compute_derived(p, r, reg, traj);
  TempDir dir("bankdyn_csv_test");
  fs::create_directories(dir.path());
  const auto path = dir.path() / "one.csv";
  write_trajectory_csv(traj, derived, path.string());

  const std::string text = read_file(path);
  const std::string header = text.substr(0, text.find('\n'));
  EXPECT_EQ(header,
            "t,D,L,r_D,r_L,r,alpha_D,alpha_L,lambda,gwm_ldr,reserve_primary,"
            "reserve_secondary,reserve_total");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_EQ(text.find('\r'), std::string::npos);

  // lambda = 2 and gwm = 0.2*(2-1)*10 = 2 in the only data row
  std::vector<std::string> fields;
  std::istringstream row(first_data_row(text));
  std::string field;
  while (std::getline(row, field, ',')) fields.push_back(field);
  ASSERT_EQ(fields.size(), 13u);
  EXPECT_EQ(fields[0], "0");
  EXPECT_EQ(fields[1], "10");
  EXPECT_EQ(fields[2], "20");
  EXPECT_EQ(fields[8], "2");
  EXPECT_EQ(fields[9], "2");
}

TEST(Csv, RoundTripsThroughFifteenSignificantDigits) {
  ModelParams p;
  RateSet r;
  RegulationParams reg;
  IntegratorConfig cfg;
  cfg.t_end = 0.002;
  const Trajectory traj = integrate(p, r, {0.0, 10.0, 20.0}, cfg);
  const DerivedSeries derived = compute_derived(p, r, reg, traj);
  TempDir dir("bankdyn_csv_roundtrip");
  fs::create_directories(dir.path());
  const auto path = dir.path() / "run.csv";
  write_trajectory_csv(traj, derived, path.string());

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  std::size_t i = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    const double t = std::stod(field);
    std::getline(row, field, ',');
    const double d = std::stod(field);
    std::getline(row, field, ',');
    const double l = std::stod(field);
    ASSERT_LT(i, traj.samples.size());
    EXPECT_NEAR(t, traj.samples[i].t, 1e-12 * std::max(1.0, std::abs(traj.samples[i].t)));
    EXPECT_NEAR(d, traj.samples[i].deposits, 1e-12 * traj.samples[i].deposits);
    EXPECT_NEAR(l, traj.samples[i].loans, 1e-12 * traj.samples[i].loans);
    ++i;
  }
  EXPECT_EQ(i, traj.samples.size());
}

TEST(Svg, ConstantSeriesRendersOnePolyline) {
  TempDir dir("bankdyn_svg_test");
  fs::create_directories(dir.path());
  const auto path = dir.path() / "flat.svg";
  SvgChart chart{"flat", "t", "y", {{"level", {{0.0, 1.0}, {1.0, 1.0}, {2.0, 1.0}}}}, {}};
  render_svg_lines(chart, path.string());
  const std::string text = read_file(path);
  EXPECT_NE(text.find("<svg"), std::string::npos);
  EXPECT_NE(text.find("</svg>"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '<'),
            std::count(text.begin(), text.end(), '>'));
  std::size_t polylines = 0;
  for (std::size_t pos = text.find("<polyline"); pos != std::string::npos;
       pos = text.find("<polyline", pos + 1))
    ++polylines;
  EXPECT_EQ(polylines, 1u);
}

TEST(Svg, GuideLinesAppearWithLabels) {
  TempDir dir("bankdyn_svg_guides");
  fs::create_directories(dir.path());
  const auto path = dir.path() / "ldr.svg";
  SvgChart chart{"ldr", "t", "L/D",
                 {{"A", {{0.0, 0.5}, {1.0, 1.6}}}},
                 {0.78, 1.0}};
  render_svg_lines(chart, path.string());
  const std::string text = read_file(path);
  std::size_t dashed = 0;
  for (std::size_t pos = text.find("stroke-dasharray"); pos != std::string::npos;
       pos = text.find("stroke-dasharray", pos + 1))
    ++dashed;
  EXPECT_EQ(dashed, 2u);
  EXPECT_NE(text.find(">0.78<"), std::string::npos);
  EXPECT_NE(text.find(">1<"), std::string::npos);
}

TEST(Svg, RejectsEmptyCharts) {
  SvgChart none{"x", "t", "y", {}, {}};
  EXPECT_THROW(render_svg_lines(none, "/tmp/unused.svg"), std::invalid_argument);
  SvgChart empty_series{"x", "t", "y", {{"A", {}}}, {}};
  EXPECT_THROW(render_svg_lines(empty_series, "/tmp/unused.svg"), std::invalid_argument);
}

TEST(Cli, UsageErrorsExitWith64) {
  EXPECT_EQ(cli_dispatch({"--no-such-flag"}), 64);
  EXPECT_EQ(cli_dispatch({"loci", "--bogus"}), 64);
  EXPECT_EQ(cli_dispatch({"simulate"}), 64);  // missing required --d0/--l0
  EXPECT_EQ(cli_dispatch({}), 64);            // missing subcommand
}

TEST(Cli, LociPrintsTheCoefficients) {
  testing::internal::CaptureStdout();
  const int rc = cli_dispatch({"loci"});
  const std::string out = testing::internal::GetCapturedStdout();
  EXPECT_EQ(rc, 0);
  EXPECT_NE(out.find("deposit locus"), std::string::npos);
  EXPECT_NE(out.find("loan locus"), std::string::npos);
  EXPECT_NE(out.find("0.01515"), std::string::npos);
  EXPECT_NE(out.find("-0.01145"), std::string::npos);
  EXPECT_NE(out.find("0.0548"), std::string::npos);
  EXPECT_NE(out.find("-0.0092"), std::string::npos);
  EXPECT_NE(out.find("1.515"), std::string::npos);
  EXPECT_NE(out.find("8.48"), std::string::npos);
}

TEST(Cli, SimulateCompletedRunWritesTheCsvAndExitsCleanly) {
  TempDir dir("bankdyn_cli_sim");
  testing::internal::CaptureStdout();
  const int rc = cli_dispatch({"simulate", "--d0", "10", "--l0", "20", "--out-dir",
                               dir.str(), "--config", "/dev/null"});
  testing::internal::GetCapturedStdout();
  EXPECT_EQ(rc, 0);  // a region-3 start never reaches a locus
  const std::string text = read_file(dir.path() / "simulate.csv");
  EXPECT_FALSE(text.empty());
  // first data row carries lambda = 20/10 = 2
  const std::string row = first_data_row(text);
  EXPECT_NE(row.find(",2,"), std::string::npos);
}

TEST(Cli, SimulateSingularRunExitsWith2AndWritesPartialOutput) {
  TempDir dir("bankdyn_cli_singular");
  testing::internal::CaptureStdout();
  const int rc =
      cli_dispatch({"simulate", "--d0", "6", "--l0", "2.47", "--out-dir", dir.str()});
  testing::internal::GetCapturedStdout();
  EXPECT_EQ(rc, 2);
  const std::string text = read_file(dir.path() / "simulate.csv");
  EXPECT_FALSE(text.empty());
}

TEST(Cli, SimulateRejectsBadInitialStates) {
  TempDir dir("bankdyn_cli_bad");
  const int rc =
      cli_dispatch({"simulate", "--d0", "-1", "--l0", "2", "--out-dir", dir.str()});
  EXPECT_EQ(rc, 1);
}

TEST(Cli, BadConfigExitsWith1) {
  TempDir dir("bankdyn_cli_badcfg");
  fs::create_directories(dir.path());
  const auto cfg_path = dir.path() / "bad.ini";
  {
    std::ofstream out(cfg_path);
    out << "[params]\nkappa1 = 0.5\nkappa2 = 0.4\ndelta = 0.2\n";
  }
  EXPECT_EQ(cli_dispatch({"loci", "--config", cfg_path.string()}), 1);
  EXPECT_EQ(cli_dispatch({"loci", "--config", (dir.path() / "missing.ini").string()}), 1);
}

TEST(Cli, SweepUnknownSetExitsWith1) {
  TempDir dir("bankdyn_cli_unknown_set");
  testing::internal::CaptureStderr();
  const int rc = cli_dispatch({"sweep", "--set", "set9", "--out-dir", dir.str()});
  const std::string err = testing::internal::GetCapturedStderr();
  EXPECT_EQ(rc, 1);
  EXPECT_NE(err.find("set9"), std::string::npos);
}

TEST(Cli, SweepSet1HitsLociAndStillWritesCsvs) {
  TempDir dir("bankdyn_cli_sweep1");
  const auto cfg_path = fs::temp_directory_path() / "bankdyn_sweep1.ini";
  {
    std::ofstream out(cfg_path);
    out << "[integrator]\nt_end = 0.6\n";  // enough to cross the deposit locus
  }
  testing::internal::CaptureStdout();
  const int rc = cli_dispatch({"sweep", "--set", "set1", "--out-dir", dir.str(),
                               "--config", cfg_path.string()});
  const std::string out = testing::internal::GetCapturedStdout();
  fs::remove(cfg_path);
  EXPECT_EQ(rc, 2);
  EXPECT_NE(out.find("singular"), std::string::npos);
  for (const char label : {'A', 'J'})
    EXPECT_TRUE(fs::exists(dir.path() / (std::string("set1_") + label + ".csv")));
  EXPECT_FALSE(fs::exists(dir.path() / "compare_set1_set2.csv"));
}

TEST(Cli, SweepAllWritesComparisonsAndSvgs) {
  TempDir dir("bankdyn_cli_sweepall");
  const auto cfg_path = fs::temp_directory_path() / "bankdyn_sweepall.ini";
  {
    // ratios and horizon chosen so no set reaches a locus
    std::ofstream out(cfg_path);
    out << "[integrator]\nt_end = 0.01\n[scenario]\nratios = 0.5, 0.8\n";
  }
  testing::internal::CaptureStdout();
  const int rc = cli_dispatch({"sweep", "--set", "all", "--out-dir", dir.str(),
                               "--config", cfg_path.string(), "--svg"});
  testing::internal::GetCapturedStdout();
  fs::remove(cfg_path);
  EXPECT_EQ(rc, 0);  // short horizon: nothing crosses
  EXPECT_TRUE(fs::exists(dir.path() / "set1_A.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "set3_B.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "compare_set1_set2.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "compare_set2_set3.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "compare_set1_set3.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "set2_ldr.svg"));
  EXPECT_TRUE(fs::exists(dir.path() / "set2_gwm.svg"));
  const std::string phase = read_file(dir.path() / "set2_phase.svg");
  EXPECT_NE(phase.find(">D<"), std::string::npos);  // loans plotted against deposits
  EXPECT_NE(phase.find(">L<"), std::string::npos);
  const std::string ldr_chart = read_file(dir.path() / "set2_ldr.svg");
  EXPECT_NE(ldr_chart.find(">0.78<"), std::string::npos);
  EXPECT_NE(ldr_chart.find(">1<"), std::string::npos);
  const std::string compare = read_file(dir.path() / "compare_set2_set3.csv");
  EXPECT_NE(compare.find("label,initial_ldr,gwm_a,gwm_b,gwm_diff"), std::string::npos);
}

TEST(Cli, GwmWritesTheSummary) {
  TempDir dir("bankdyn_cli_gwm");
  const auto cfg_path = fs::temp_directory_path() / "bankdyn_gwm.ini";
  {
    std::ofstream out(cfg_path);
    out << "[integrator]\nt_end = 0.02\n[scenario]\nd0 = 10\nratios = 0.4, 1.8\n";
  }
  testing::internal::CaptureStdout();
  const int rc = cli_dispatch(
      {"gwm", "--out-dir", dir.str(), "--config", cfg_path.string()});
  testing::internal::GetCapturedStdout();
  fs::remove(cfg_path);
  EXPECT_EQ(rc, 0);
  const std::string text = read_file(dir.path() / "gwm_summary.csv");
  EXPECT_NE(text.find("set,label,initial_ldr,integrated_gwm"), std::string::npos);
  EXPECT_NE(text.find("set1,A,"), std::string::npos);
  EXPECT_NE(text.find("set1,B,"), std::string::npos);
}

TEST(Cli, ValidateWritesDiagnoses) {
  TempDir dir("bankdyn_cli_validate");
  const auto cfg_path = fs::temp_directory_path() / "bankdyn_validate.ini";
  {
    std::ofstream out(cfg_path);
    out << "[integrator]\nt_end = 0.5\n[scenario]\nd0 = 10\nratios = 1, 2\n";
  }
  testing::internal::CaptureStdout();
  const int rc = cli_dispatch(
      {"validate", "--out-dir", dir.str(), "--config", cfg_path.string()});
  testing::internal::GetCapturedStdout();
  fs::remove(cfg_path);
  EXPECT_EQ(rc, 0);
  const std::string text = read_file(dir.path() / "validate.csv");
  EXPECT_NE(text.find("set,label,loan_corr,deposit_corr"), std::string::npos);
  EXPECT_NE(text.find("set1,A,"), std::string::npos);
}

}  // namespace
