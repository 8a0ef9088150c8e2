#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fracstep/errors.hpp"
#include "run_config.hpp"
#include "runner.hpp"

namespace fs = std::filesystem;
using namespace fracstep::cli;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fracstep_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / (name + ".cfg");
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  return run_main(args, out, err);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      cells.push_back(cell);
    }
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Config, ParsesKeys) {
  const RunConfig c = parse_config(
      "# comment\nproblem = ex2\nalpha = 0.3\ngamma = 0.5 # trailing\ntol=1e-3\n"
      "detect = true\nonsets = 0, 0.25\nweights = 1, 0.5\nstrategy = shift\n");
  EXPECT_EQ(c.problem, fracstep::ProblemId::ex2);
  EXPECT_EQ(c.alpha, 0.3);
  EXPECT_EQ(c.gamma, 0.5);
  EXPECT_EQ(c.tol, 1e-3);
  EXPECT_TRUE(c.detect);
  EXPECT_EQ(c.onsets, (std::vector<double>{0.0, 0.25}));
  EXPECT_EQ(c.strategy, Strategy::shift);
}

TEST(Config, RejectsMalformed) {
  EXPECT_THROW((void)parse_config("alpha = zero\n"), fracstep::ConfigError);
  EXPECT_THROW((void)parse_config("colour = red\n"), fracstep::ConfigError);
  EXPECT_THROW((void)parse_config("tol = 1e-3\ntol = 1e-4\n"), fracstep::ConfigError);
  EXPECT_THROW((void)parse_config("tol\n"), fracstep::ConfigError);
  EXPECT_THROW((void)parse_config("alpha = 1.5\n"), fracstep::ConfigError);
  EXPECT_THROW((void)parse_config("strategy = guess\n"), fracstep::ConfigError);
  EXPECT_THROW((void)parse_config("onsets = 0.1, 0.2\n"), fracstep::ConfigError);
}

TEST(Cli, Ex1DefaultRun) {
  const fs::path dir = scratch("ex1");
  const fs::path cfg = write_config(dir, "ex1", "problem = ex1\nalpha = 0.4\ntol = 1e-3\n");
  ASSERT_EQ(run({"--config", cfg.string(), "--out", (dir / "out").string()}), 0);
  for (const char* f : {"mesh.csv", "residual_trace.csv", "solution.csv", "report.json"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
  const auto j = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  EXPECT_GT(j["step_count"].get<int>(), 0);
  EXPECT_LE(j["max_error"].get<double>(), j["error_bound"].get<double>());
  EXPECT_EQ(j["error_bound"].get<double>(), 4.0 * 1e-3);

  const auto mesh = read_csv(dir / "out" / "mesh.csv");
  EXPECT_EQ(mesh.front(), (std::vector<std::string>{"step_index", "t_left", "t_right", "width"}));
  EXPECT_EQ(mesh.size(), static_cast<std::size_t>(j["step_count"].get<int>()) + 1);
  const auto trace = read_csv(dir / "out" / "residual_trace.csv");
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i][4] == "0") {
      EXPECT_LE(std::stod(trace[i][1]), std::stod(trace[i][3])) << i;
    }
  }
  EXPECT_EQ(read_csv(dir / "out" / "solution.csv").front(),
            (std::vector<std::string>{"t", "x", "value"}));
}

TEST(Cli, SplitAndBarrierMeetBound) {
  const fs::path dir = scratch("split");
  const fs::path cfg = write_config(dir, "ex1", "problem = ex1\nalpha = 0.4\ntol = 1e-3\n");
  for (const char* s : {"split", "barrier", "shift"}) {
    const fs::path out = dir / s;
    ASSERT_EQ(run({"--config", cfg.string(), "--strategy", s, "--out", out.string()}), 0) << s;
    const auto j = nlohmann::json::parse(slurp(out / "report.json"));
    EXPECT_EQ(j["strategy"].get<std::string>(), s);
    EXPECT_LE(j["max_error"].get<double>(), 4.0 * 1e-3) << s;
  }
}

TEST(Cli, MalformedConfigWritesNothing) {
  const fs::path dir = scratch("bad");
  const fs::path cfg = write_config(dir, "bad", "problem = ex1\nalpha = oops\n");
  EXPECT_EQ(run({"--config", cfg.string(), "--out", (dir / "out").string()}), 3);
  EXPECT_FALSE(fs::exists(dir / "out"));
  EXPECT_EQ(run({"--config", (dir / "missing.cfg").string()}), 3);
  EXPECT_EQ(run({"--bogus"}), 3);
  EXPECT_EQ(run({}), 3);
}

TEST(Cli, LockingExitCode) {
  const fs::path dir = scratch("lock");
  // a tolerance below the residual floor cannot be met, forcing tau_min cells
  const fs::path cfg = write_config(
      dir, "lock", "problem = ex1\nalpha = 0.4\ntol = 1e-14\nmax_forced_cells = 2\n");
  EXPECT_EQ(run({"--config", cfg.string(), "--out", (dir / "out").string()}), 2);
  EXPECT_FALSE(fs::exists(dir / "out"));
  EXPECT_EQ(run({"--config", cfg.string(), "--strategy", "split", "--out", (dir / "o2").string()}),
            2);
}

TEST(Cli, CompareTable) {
  const fs::path dir = scratch("compare");
  const fs::path gen = write_config(dir, "generalized", "problem = ex1\ntol = 1e-3\n");
  const fs::path plain = write_config(dir, "plain", "problem = ex1\ntol = 1e-3\nbarrier = plain\n");
  const fs::path twin = write_config(dir, "twin", "problem = ex1\ntol = 1e-3\n");
  ASSERT_EQ(run({"--compare", gen.string() + "," + plain.string() + "," + twin.string(), "--out",
                 (dir / "out").string()}),
            0);
  const auto rows = read_csv(dir / "out" / "compare.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0][0], "config_label");
  EXPECT_GE(std::stod(rows[2][1]), 1.5 * std::stod(rows[1][1]));
  // identical configs give identical rows apart from the wall time
  for (std::size_t i = 1; i + 1 < rows[1].size(); ++i) {
    EXPECT_EQ(rows[1][i], rows[3][i]);
  }
  EXPECT_EQ(slurp(dir / "out" / "generalized" / "mesh.csv"), slurp(dir / "out" / "twin" / "mesh.csv"));
  EXPECT_EQ(slurp(dir / "out" / "generalized" / "residual_trace.csv"),
            slurp(dir / "out" / "twin" / "residual_trace.csv"));
  EXPECT_EQ(slurp(dir / "out" / "generalized" / "solution.csv"),
            slurp(dir / "out" / "twin" / "solution.csv"));

  const fs::path other = write_config(dir, "other", "problem = neg_lambda_scalar\n");
  EXPECT_EQ(run({"--compare", gen.string() + "," + other.string(), "--out", (dir / "o2").string()}), 3);
  EXPECT_FALSE(fs::exists(dir / "o2"));
}

TEST(Cli, TolSweepCompare) {
  const fs::path dir = scratch("sweep");
  std::string list;
  for (const char* tol : {"1e-2", "1e-3", "1e-4"}) {
    const fs::path p = write_config(dir, std::string("tol") + tol,
                                    std::string("problem = neg_lambda_scalar\ntol = ") + tol + "\n");
    list += (list.empty() ? "" : ",") + p.string();
  }
  ASSERT_EQ(run({"--compare", list, "--out", (dir / "out").string()}), 0);
  const auto rows = read_csv(dir / "out" / "compare.csv");
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LE(std::stod(rows[i][2]), std::stod(rows[i][3])) << rows[i][0];
  }
}
