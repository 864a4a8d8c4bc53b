#include <filesystem>
#include <optional>
#include <set>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "v2x/error.hpp"
#include "v2x/harness/config.hpp"
#include "v2x/harness/experiment.hpp"

namespace {

using namespace v2x;
using namespace v2x::harness;
namespace fs = std::filesystem;

const fs::path kConfigs{V2XRELAY_CONFIG_DIR};

class ExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("v2xrelay_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  RunManifest run(const std::string& name, const std::string& config, const std::string& sub,
                  std::uint64_t seed, std::optional<std::size_t> trials = {},
                  std::optional<std::size_t> l_max = {}) {
    RunOptions o;
    o.seed = seed;
    o.out_dir = root_ / sub;
    o.trials = trials;
    o.l_max = l_max;
    return run_experiment(name, load_config(kConfigs / config), o);
  }

  fs::path root_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

TEST_F(ExperimentTest, Fig5IsByteIdenticalAcrossRuns) {
  const auto a = run("fig5", "fig5.cfg", "a", 7, 5);
  const auto b = run("fig5", "fig5.cfg", "b", 7, 5);
  EXPECT_EQ(a.exit_code, kExitOk);
  for (const char* f : {"capacity.csv", "margins.csv"}) {
    const auto x = slurp(root_ / "a" / f);
    EXPECT_FALSE(x.empty());
    EXPECT_EQ(x, slurp(root_ / "b" / f)) << f;
  }
  EXPECT_NE(slurp(root_ / "a" / "capacity.csv"),
            slurp(run("fig5", "fig5.cfg", "c", 8, 5).out_dir / "capacity.csv"));
}

TEST_F(ExperimentTest, CapacitySchema) {
  const auto m = run("fig5", "fig5.cfg", "s", 3, 2, 4);
  const auto rows = csv_rows(m.out_dir / "capacity.csv");
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], (std::vector<std::string>{"L", "label", "mean_capacity_kbps", "trials", "seed"}));
  EXPECT_EQ(rows.size(), 1u + 4u * 5u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 5u);
    EXPECT_EQ(rows[i][3], "2");
    EXPECT_EQ(rows[i][4], "3");
  }
  const auto margins = csv_rows(m.out_dir / "margins.csv");
  EXPECT_EQ(margins[0], (std::vector<std::string>{"L", "baseline_label", "margin_kbps"}));
  EXPECT_EQ(margins.size(), 1u + 4u * 4u);
  const auto manifest = nlohmann::json::parse(slurp(m.out_dir / "manifest.json"));
  EXPECT_EQ(manifest["master_seed"], 3);
  EXPECT_EQ(manifest["config_sha256"].get<std::string>(), load_config(kConfigs / "fig5.cfg").digest);
  EXPECT_TRUE(manifest.contains("effective_config"));
  EXPECT_TRUE(manifest.contains("tool_version"));
}

TEST_F(ExperimentTest, Fig3HasOneCurvePerStep) {
  const auto m = run("fig3", "fig3.cfg", "f3", 1, 2, 3);
  std::set<std::string> labels;
  for (const auto& row : csv_rows(m.out_dir / "capacity.csv")) {
    if (row[0] != "L") labels.insert(row[1]);
  }
  EXPECT_EQ(labels, (std::set<std::string>{"proposed_b3@d=0.001", "proposed_b3@d=0.004",
                                           "topk_b2@d=0.001", "topk_b2@d=0.004"}));
}

TEST_F(ExperimentTest, BoundCheckHoldsEverywhere) {
  const auto m = run("bound-check", "fig5.cfg", "bound", 11, 500);
  EXPECT_EQ(m.exit_code, kExitOk);
  const auto rows = csv_rows(m.out_dir / "bound.csv");
  ASSERT_EQ(rows.size(), 501u);
  std::size_t holds_col = 0;
  while (rows[0][holds_col] != "holds") ++holds_col;
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][holds_col], "true") << i;
}

TEST_F(ExperimentTest, ChainCheckAndOrchestrateRun) {
  const auto chain = run("chain-check", "fig5.cfg", "chain", 2, 20);
  EXPECT_EQ(chain.exit_code, kExitOk);
  EXPECT_GT(csv_rows(chain.out_dir / "chain.csv").size(), 20u);
  const auto orch = run("orchestrate", "fig5.cfg", "orch", 2);
  EXPECT_EQ(orch.exit_code, kExitOk);
  const auto rows = csv_rows(orch.out_dir / "orchestrate.csv");
  EXPECT_EQ(rows[0], (std::vector<std::string>{"destination", "L", "relay_ids", "capacity_kbps",
                                                 "status"}));
  EXPECT_EQ(rows.size(), 4u);
}

TEST_F(ExperimentTest, InfeasibleCellsExitWithCode3) {
  auto cfg = parse_config(
      "version = 1\n[population]\nn_total = 20\nmin_power = 5\n[sweep]\nl_min = 1\nl_max = 4\n"
      "trials = 1\nalgorithms = topk_b2\n[scenario]\nper_relay_power = 1\n",
      "bad.cfg");
  RunOptions o;
  o.out_dir = root_ / "bad";
  const auto m = run_experiment("fig5", cfg, o);
  EXPECT_EQ(m.exit_code, kExitInfeasible);
  EXPECT_TRUE(fs::exists(o.out_dir / "failure.json"));
  const auto rows = csv_rows(o.out_dir / "capacity.csv");
  EXPECT_EQ(rows[1][2], "invalid");
}

TEST(Experiment, FormatNumberRoundTrips) {
  for (double v : {0.1, 2.2046954680688497, 1e-300, 12345678.9, 0.0}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(3.0), "3");
}

TEST(Experiment, UnknownExperimentIsConfigError) {
  RunOptions o;
  o.out_dir = fs::temp_directory_path() / "v2xrelay_unknown";
  EXPECT_THROW(run_experiment("fig9", parse_config("version = 1\n"), o), Error);
  EXPECT_FALSE(fs::exists(o.out_dir / "capacity.csv"));
}

}  // namespace
