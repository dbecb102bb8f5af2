#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "epr/commands.hpp"

using namespace epr;
namespace fs = std::filesystem;

namespace {

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("epr_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunManifest manifest(const std::string& body, const std::string& name = "case") {
  return parse_config(body, name);
}

constexpr const char* kSmallN3 =
    "[params]\nN = 3\nbeta = {}\n[grid]\ncells = 64\n[initial]\nprofile = parabolic-cap\n[run]\nt_end = 0.2\n"
    "output_every = 0.05\n";

RunManifest small(double beta, const std::string& name) { return manifest(fmt::format(kSmallN3, beta), name); }

}  // namespace

TEST(Csv, HeaderAndRowFormat) {
  EXPECT_STREQ(csv_header,
               "t,M,E,H,Hddot_integral,R_support,omega_volume,potential_energy,kinetic_dissipation,max_rho,max_dVdr");
  DiagnosticsRecord r;
  r.t = 0.1;
  r.M = 1.0 / 3.0;
  EXPECT_EQ(csv_row(r), "0.10000000000000001,0.33333333333333331,0,0,0,0,0,0,0,0,0");
}

TEST(RunCommand, ZeroDensityPassesVacuously) {
  const auto m = manifest("[initial]\nprofile = uniform-ball\nrho0 = 0\n[run]\nt_end = 0.2\n[grid]\ncells = 64\n");
  const auto r = run_command(m, std::nullopt);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(contains(r.output, "PASS          energy-dissipation  (vacuous: zero mass)"));
  EXPECT_TRUE(contains(r.output, "audit.inertia-identity = PASS"));
  EXPECT_FALSE(contains(r.output, "FAIL"));
}

TEST(RunCommand, N2PressurelessReportsBound) {
  const auto m = manifest(
      "[params]\nN = 2\nK = 0\n[grid]\ncells = 256\nr_max = 8\n[initial]\nprofile = uniform-ball\n"
      "rho0 = 0.5\nradius = 1\n[run]\nt_end = 0.5\n");
  const auto r = run_command(m, std::nullopt);
  const double M = 0.5 * std::numbers::pi;
  EXPECT_TRUE(contains(r.output, fmt::format("bound_n2 = {:.17g}", std::sqrt(1.0 / (2.0 * M))))) << r.output;
  EXPECT_TRUE(contains(r.output, "expansion"));
  EXPECT_TRUE(contains(r.output, "audit.expansion = INCONCLUSIVE"));
}

TEST(RunCommand, NumericFailureGivesNonzeroExit) {
  const auto m = manifest("[grid]\ncells = 64\n[testing]\ninject_nan_step = 3\n");
  const auto r = run_command(m, std::nullopt);
  EXPECT_NE(r.exit_code, 0);
  EXPECT_TRUE(contains(r.output, "termination: numeric-failure"));
  EXPECT_TRUE(contains(r.output, "status = failed"));
}

TEST(RunCommand, WritesDeterministicArtifacts) {
  const auto dir1 = scratch("det1");
  const auto dir2 = scratch("det2");
  const auto m = small(0.0, "det");
  EXPECT_EQ(run_command(m, dir1).exit_code, 0);
  EXPECT_EQ(run_command(m, dir2).exit_code, 0);
  const std::string csv = slurp(dir1 / "det.csv");
  EXPECT_EQ(csv, slurp(dir2 / "det.csv"));
  EXPECT_EQ(slurp(dir1 / "det.report.txt"), slurp(dir2 / "det.report.txt"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), csv_header);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(SweepCommand, SingleManifestMatchesRun) {
  const auto run_dir = scratch("single_run");
  const auto sweep_dir = scratch("single_sweep");
  const auto m = small(0.0, "one");
  const auto single = run_command(m, run_dir);
  std::vector<SweepItem> items{{"one", m, ""}};
  const auto agg = sweep_command(items, 1, sweep_dir);
  EXPECT_EQ(agg.exit_code, single.exit_code);
  EXPECT_EQ(slurp(sweep_dir / "one.report.txt"), single.output);
  EXPECT_EQ(slurp(sweep_dir / "one.csv"), slurp(run_dir / "one.csv"));
  EXPECT_EQ(std::count(agg.output.begin(), agg.output.end(), '\n'), 2);
  EXPECT_EQ(agg.output.substr(0, 2), "N,");
  EXPECT_EQ(slurp(sweep_dir / "aggregate.csv"), agg.output);
}

TEST(SweepCommand, WorkerCountDoesNotChangeAggregate) {
  std::vector<SweepItem> items;
  for (int k = 0; k < 4; ++k) {
    const std::string name = fmt::format("m{}", 3 - k);
    items.push_back({name, small(0.25 * k, name), ""});
  }
  const auto serial = sweep_command(items, 1, std::nullopt);
  const auto parallel = sweep_command(items, 4, std::nullopt);
  EXPECT_EQ(serial.output, parallel.output);
  EXPECT_LT(serial.output.find(",m3,"), serial.output.find(",m0,"));
}

TEST(SweepCommand, DampedBoundOnlyForPositiveBeta) {
  std::vector<SweepItem> items;
  for (double beta : {0.0, 0.5, 1.0}) {
    const std::string name = fmt::format("b{}", beta);
    items.push_back({name, small(beta, name), ""});
  }
  const auto agg = sweep_command(items, 3, std::nullopt);
  std::istringstream lines(agg.output);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    ASSERT_GE(cols.size(), 11u);
    const bool damped = std::stod(cols[3]) > 0.0;
    EXPECT_EQ(cols[10] != "absent", damped) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST(SweepCommand, FailuresAreRecordedPerRow) {
  std::vector<SweepItem> items{{"good", small(0.0, "good"), ""},
                               {"broken", std::nullopt, "gamma >= 1 required (got 0.5)"},
                               {"nan", manifest("[grid]\ncells = 64\n[testing]\ninject_nan_step = 2\n", "nan"), ""}};
  const auto agg = sweep_command(items, 2, std::nullopt);
  EXPECT_NE(agg.exit_code, 0);
  EXPECT_TRUE(contains(agg.output, "broken,config-error,failed"));
  EXPECT_TRUE(contains(agg.output, "nan,numeric-failure,failed"));
  EXPECT_TRUE(contains(agg.output, "good,completed,ok"));
}

TEST(SweepCommand, LoadsDirectory) {
  const auto dir = scratch("dir");
  std::ofstream(dir / "a.ini") << fmt::format(kSmallN3, 0.0);
  std::ofstream(dir / "b.ini") << "[params]\ngamma = 0.5\n";
  std::ofstream(dir / "notes.txt") << "ignored";
  const auto items = load_sweep_dir(dir);
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[0].name, "a");
  EXPECT_TRUE(items[0].manifest.has_value());
  EXPECT_FALSE(items[1].manifest.has_value());
  EXPECT_TRUE(contains(items[1].load_error, "gamma >= 1"));
  EXPECT_THROW(load_sweep_dir(dir / "missing"), ConfigError);
  EXPECT_THROW(sweep_command({}, 1, std::nullopt), ContractError);
}

TEST(BoundsCommand, InitialState) {
  const auto m = manifest(
      "[params]\nN = 3\nK = 0\n[initial]\nprofile = uniform-ball\nvelocity = linear\nvelocity_slope = 1\n");
  const auto r = bounds_command(m);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(contains(r.output, "bound_n3 = "));
  EXPECT_TRUE(contains(r.output, "bound_n2 = absent"));
  EXPECT_TRUE(contains(r.output, "blowup_time_bound = "));
  EXPECT_FALSE(contains(r.output, "blowup_time_bound = absent"));
}

TEST(EmdenCommand, Table) {
  const auto r = emden_command(1.0, 0.0, 3, 1.0, 4);
  EXPECT_EQ(r.output, "t,R,Rdot\n0,1,0\n0.25,1,0\n0.5,1,0\n0.75,1,0\n1,1,0\n");
}
