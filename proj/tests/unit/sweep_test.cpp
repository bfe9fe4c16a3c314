#include <gtest/gtest.h>

#include <filesystem>

#include "circuitkit/error.hpp"
#include "circuitkit/io.hpp"
#include "circuitkit/sweep.hpp"
#include "circuitkit/synth.hpp"

namespace circuitkit {
namespace {

namespace fs = std::filesystem;

class SweepTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("circuitkit_sweep_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    SynthSpec spec;
    spec.layers = 4;
    spec.nodes_per_layer = 3;
    spec.noise_sigma = 0.5;
    spec.flip_probability = 0.3;
    spec.seed = 4;
    inst_ = generate(spec);
    inputs_.graph = inst_.graph;
    inputs_.matrix = inst_.scores;
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  SynthInstance inst_;
  SweepInputs inputs_;
};

TEST_F(SweepTest, PnrGridTimesBudgets) {
  SweepConfig cfg;
  cfg.methods = {Strategy::kPnr};
  cfg.pnr_grid = {0.3, 0.4, 0.45, 0.5, 0.55, 0.6, 0.7, 0.8, 0.9};
  cfg.k_grid = {2, 5, 9};
  const auto report = run_sweep(inputs_, cfg, dir_);
  EXPECT_EQ(report.rows.size(), 27u);
  EXPECT_EQ(sweep_cardinality(cfg, 3), 27u);
  const auto csv = io::read_file(dir_ / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 28);
  for (const auto& r : report.rows) {
    EXPECT_TRUE(fs::exists(dir_ / r.circuit_file)) << r.circuit_file;
  }
}

TEST_F(SweepTest, DefaultBudgetsFromLogGrid) {
  SweepConfig cfg;
  const auto report = run_sweep(inputs_, cfg, dir_);
  const auto ks = sweep_sizes(edge_count_on_paths(inst_.graph));
  ASSERT_EQ(report.rows.size(), ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) EXPECT_EQ(report.rows[i].k, ks[i]);
}

TEST_F(SweepTest, IlpDominatesGreedyRowByRow) {
  SweepConfig cfg;
  cfg.methods = {Strategy::kGreedy, Strategy::kIlp};
  cfg.tau_grid = {5, 10};
  cfg.k_grid = {3, 4, 6, 8, 12};
  const auto report = run_sweep(inputs_, cfg, dir_);
  ASSERT_EQ(report.rows.size(), 20u);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    if (r.method != Strategy::kGreedy || r.selected == 0) continue;
    const auto& ilp = report.rows[i + 5];
    ASSERT_EQ(ilp.method, Strategy::kIlp);
    ASSERT_EQ(ilp.k, r.k);
    ASSERT_TRUE(ilp.objective.has_value());
    EXPECT_GE(*ilp.objective, *r.objective - 1e-9 * std::abs(*r.objective));
  }
}

TEST_F(SweepTest, CellErrorsAreRecorded) {
  SweepConfig cfg;
  cfg.methods = {Strategy::kTopK};
  cfg.k_grid = {1, 10000};
  const auto report = run_sweep(inputs_, cfg, dir_);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0].status, "ok");
  EXPECT_EQ(report.rows[1].status, "error");
  EXPECT_FALSE(report.rows[1].error.empty());
}

TEST_F(SweepTest, ParallelMatchesSerial) {
  SweepConfig cfg;
  cfg.methods = {Strategy::kGreedy, Strategy::kTopK, Strategy::kIlp};
  cfg.pnr_grid = {0.5};
  cfg.k_grid = {2, 4, 8};
  run_sweep(inputs_, cfg, dir_ / "serial");
  cfg.jobs = 4;
  run_sweep(inputs_, cfg, dir_ / "parallel");
  EXPECT_EQ(io::read_file(dir_ / "serial" / "sweep.csv"),
            io::read_file(dir_ / "parallel" / "sweep.csv"));
  for (const auto& entry : fs::directory_iterator(dir_ / "serial")) {
    EXPECT_EQ(io::read_file(entry.path()),
              io::read_file(dir_ / "parallel" / entry.path().filename()));
  }
}

TEST_F(SweepTest, ConfigErrors) {
  SweepConfig cfg;
  cfg.methods.clear();
  EXPECT_THROW(run_sweep(inputs_, cfg, dir_), InvalidInput);
  cfg = {};
  cfg.tau_grid = {5};
  SweepInputs no_matrix{inst_.graph, std::nullopt, collapse_to_scores(inst_.scores)};
  EXPECT_THROW(run_sweep(no_matrix, cfg, dir_), InvalidInput);
}

}  // namespace
}  // namespace circuitkit
