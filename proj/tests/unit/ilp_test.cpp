#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "circuitkit/error.hpp"
#include "circuitkit/ilp.hpp"
#include "fixtures.hpp"

namespace circuitkit {
namespace {

using testing::make_graph;
using testing::scores_for;

SelectionConfig cfg(std::size_t k, RankMode mode = RankMode::kSigned,
                    std::optional<double> pnr = std::nullopt) {
  return SelectionConfig{k, mode, pnr, true};
}

ComputationGraph two_paths() {
  return make_graph({{"s", 0}, {"a", 1}, {"b", 1}, {"t", 2}},
                    {"s>a", "a>t", "s>b", "b>t"});
}

TEST(BuildModel, ChainRowCounts) {
  const auto g = testing::chain();
  const auto m = build_model(g, scores_for(g, {1, 1}), cfg(2));
  EXPECT_EQ(m.edge_var_count(), 2u);
  EXPECT_EQ(m.node_var_count(), 3u);
  EXPECT_EQ(m.row_count(RowKind::kBudget), 1u);
  EXPECT_EQ(m.row_count(RowKind::kTailConsistency) + m.row_count(RowKind::kHeadConsistency), 4u);
  EXPECT_EQ(m.row_count(RowKind::kOutConnectivity), 2u);
  EXPECT_EQ(m.row_count(RowKind::kInConnectivity), 2u);
  EXPECT_EQ(m.row_count(RowKind::kPositiveRatio), 0u);
  EXPECT_EQ(m.rows.size(), 9u);
}

TEST(BuildModel, PositiveRatioRowUsesRealRhs) {
  const auto g = two_paths();
  const auto m = build_model(g, scores_for(g, {2, 3, 5, -1}), cfg(3, RankMode::kSigned, 0.34));
  ASSERT_EQ(m.row_count(RowKind::kPositiveRatio), 1u);
  for (const auto& r : m.rows) {
    if (r.kind != RowKind::kPositiveRatio) continue;
    EXPECT_DOUBLE_EQ(r.rhs, 0.34 * 3);
    EXPECT_EQ(r.terms.size(), 3u);
    EXPECT_EQ(r.sense, Sense::kGreaterEqual);
  }
}

TEST(BuildModel, ObjectiveFollowsRankMode) {
  const auto g = two_paths();
  const auto s = scores_for(g, {2, 3, 5, -1});
  EXPECT_EQ(build_model(g, s, cfg(2)).objective, (std::vector<double>{2, 3, 5, -1}));
  EXPECT_EQ(build_model(g, s, cfg(2, RankMode::kAbsolute)).objective,
            (std::vector<double>{2, 3, 5, 1}));
}

TEST(BuildModel, Preconditions) {
  const auto g = testing::chain();
  EXPECT_THROW(build_model(g, scores_for(g, {1, 1}), cfg(0)), InvalidInput);
  const auto bad = make_graph({{"s", 0}, {"a", 1}, {"t", 2}}, {"s>a", "a>t", "t>a"});
  EXPECT_THROW(build_model(bad, scores_for(bad, {1, 1, 1}), cfg(2)), InvalidInput);
}

TEST(SolveExact, TwoPathExample) {
  const auto g = two_paths();
  const auto m = build_model(g, scores_for(g, {2, 3, 5, -1}), cfg(2));
  const auto sol = solve_exact(m);
  EXPECT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(g.keys_of(sol.selected), (std::vector<std::string>{"s|a|", "a|t|"}));
  EXPECT_EQ(sol.objective_value, 5.0);
  EXPECT_TRUE(audit_assignment(m, sol.selected).empty());
}

TEST(SolveExact, ZeroObjective) {
  const auto g = two_paths();
  const auto sol = solve_exact(build_model(g, scores_for(g, {0, 0, 0, 0}), cfg(4)));
  EXPECT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(sol.objective_value, 0.0);
}

TEST(SolveExact, LargeBudgetSelectsAllPathEdges) {
  const auto g = make_graph({{"s", 0}, {"a", 1}, {"b", 1}, {"c", 2}, {"t", 3}},
                            {"s>a", "s>b", "a>c", "b>c", "a>t", "c>t", "s>c"});
  const auto s = scores_for(g, {1, 2, 3, 4, 5, 6, 7});
  const auto sol = solve_exact(build_model(g, s, cfg(10)));
  EXPECT_EQ(sol.selected.size(), edge_count_on_paths(g));
  EXPECT_EQ(sol.objective_value, brute_force_oracle(g, s, cfg(10)).objective_value);
}

TEST(SolveExact, AllNegativeWithFullRatioInfeasible) {
  const auto g = two_paths();
  const auto s = scores_for(g, {-1, -2, -3, -4});
  EXPECT_EQ(solve_exact(build_model(g, s, cfg(2, RankMode::kSigned, 1.0))).status,
            SolveStatus::kInfeasible);
  EXPECT_EQ(brute_force_oracle(g, s, cfg(2, RankMode::kSigned, 1.0)).status,
            SolveStatus::kInfeasible);
}

TEST(SolveExact, NoPathWithinBudgetInfeasible) {
  const auto g = testing::chain();
  const auto sol = solve_exact(build_model(g, scores_for(g, {1, 1}), cfg(1)));
  EXPECT_EQ(sol.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(sol.has_incumbent);
}

TEST(SolveExact, NegativeSignedScoresStillNeedAPath) {
  const auto g = two_paths();
  const auto sol = solve_exact(build_model(g, scores_for(g, {-2, -3, -5, -1}), cfg(4)));
  EXPECT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(g.keys_of(sol.selected), (std::vector<std::string>{"s|a|", "a|t|"}));
  EXPECT_EQ(sol.objective_value, -5.0);
}

TEST(SolveExact, ExcludedEdgesStayOut) {
  const auto g = two_paths();
  const auto s = scores_for(g, {0, 3, 5, 4}, {true, false, false, false});
  const auto sol = solve_exact(build_model(g, s, cfg(4)));
  EXPECT_EQ(g.keys_of(sol.selected), (std::vector<std::string>{"s|b|", "b|t|"}));
}

TEST(SolveExact, NodeLimitReportsExhaustion) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto inst = testing::random_instance(rng, 12);
    const auto m = build_model(inst.graph, inst.scores, cfg(inst.graph.edge_count()));
    const auto full = solve_exact(m);
    if (full.explored_nodes < 10) continue;
    const auto cut = solve_exact(m, SolveLimits{2, 300});
    EXPECT_EQ(cut.status, SolveStatus::kBudgetExhausted);
    EXPECT_LE(cut.explored_nodes, 3u);
    if (cut.has_incumbent) EXPECT_TRUE(audit_assignment(m, cut.selected).empty());
    return;
  }
  FAIL() << "no instance needed more than 10 nodes";
}

TEST(Audit, FlagsDanglingSelection) {
  const auto g = testing::chain();
  const auto m = build_model(g, scores_for(g, {1, 1}), cfg(2));
  std::vector<std::string> only{"s|a|"};
  EXPECT_FALSE(audit_assignment(m, g.edge_set(only)).empty());
  std::vector<std::string> both{"s|a|", "a|t|"};
  EXPECT_TRUE(audit_assignment(m, g.edge_set(both)).empty());
  const auto tight = build_model(g, scores_for(g, {1, 1}), cfg(1));
  EXPECT_FALSE(audit_assignment(tight, g.edge_set(both)).empty());
}

TEST(Oracle, ChainExample) {
  const auto g = testing::chain();
  const auto sol = brute_force_oracle(g, scores_for(g, {1, 1}), cfg(2));
  EXPECT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(sol.selected.size(), 2u);
  EXPECT_EQ(sol.objective_value, 2.0);
}

TEST(Oracle, RejectsLargeGraphs) {
  std::vector<std::string> edges;
  for (int i = 0; i < 21; ++i) edges.push_back("s>t>q" + std::to_string(i));
  const auto g = make_graph({{"s", 0}, {"t", 1}}, edges);
  EXPECT_THROW(brute_force_oracle(g, scores_for(g, std::vector<double>(21, 1.0)), cfg(3)),
               InvalidInput);
}

TEST(Oracle, TieBreakIsLexicographic) {
  const auto g = make_graph({{"s", 0}, {"t", 1}}, {"s>t>b", "s>t>a"});
  const auto sol = brute_force_oracle(g, scores_for(g, {1, 1}), cfg(1));
  EXPECT_EQ(g.keys_of(sol.selected), (std::vector<std::string>{"s|t|a"}));
}

TEST(SolveExact, MatchesOracleOnRandomInstances) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 150; ++i) {
    const auto inst = testing::random_instance(rng, 10);
    const auto& g = inst.graph;
    const std::size_t k = 1 + rng() % g.edge_count();
    const RankMode mode = (rng() & 1) ? RankMode::kSigned : RankMode::kAbsolute;
    std::optional<double> pnr;
    if (rng() % 3 == 0) pnr = static_cast<double>(rng() % 11) / 10.0;
    const auto m = build_model(g, inst.scores, cfg(k, mode, pnr));
    const auto sol = solve_exact(m);
    const auto oracle = brute_force_oracle(g, inst.scores, cfg(k, mode, pnr));
    ASSERT_EQ(sol.status, oracle.status) << "instance " << i;
    if (sol.status == SolveStatus::kOptimal) {
      EXPECT_EQ(sol.objective_value, oracle.objective_value) << "instance " << i;
      EXPECT_TRUE(audit_assignment(m, sol.selected).empty());
      EXPECT_TRUE(audit_assignment(m, oracle.selected).empty());
    }
  }
}

TEST(SolveExact, MonotoneInBudget) {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 60; ++i) {
    const auto inst = testing::random_instance(rng, 12);
    double last = -INFINITY;
    for (std::size_t k = 1; k <= inst.graph.edge_count(); ++k) {
      const auto sol = solve_exact(build_model(inst.graph, inst.scores, cfg(k)));
      if (sol.status != SolveStatus::kOptimal) continue;
      EXPECT_GE(sol.objective_value, last);
      last = sol.objective_value;
    }
  }
}

TEST(ToSelection, CarriesSolverOutcome) {
  const auto g = two_paths();
  const auto m = build_model(g, scores_for(g, {2, 3, 5, -1}), cfg(2));
  const auto sol = solve_exact(m);
  const auto sel = to_selection(m, sol);
  EXPECT_EQ(sel.strategy, Strategy::kIlp);
  EXPECT_EQ(sel.selected, sol.selected);
  EXPECT_EQ(sel.objective_value, 5.0);
  EXPECT_EQ(sel.budget_k, 2u);
}

}  // namespace
}  // namespace circuitkit
