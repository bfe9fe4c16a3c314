#include <gtest/gtest.h>

#include <cmath>

#include "circuitkit/error.hpp"
#include "circuitkit/ilp.hpp"
#include "circuitkit/io.hpp"
#include "circuitkit/synth.hpp"

namespace circuitkit {
namespace {

TEST(SynthSpec, Bounds) {
  SynthSpec s;
  s.layers = 1;
  EXPECT_THROW(s.validate(), InvalidInput);
  s = {};
  s.planted_fraction = 0.0;
  EXPECT_THROW(s.validate(), InvalidInput);
  s = {};
  s.flip_probability = 1.5;
  EXPECT_THROW(s.validate(), InvalidInput);
  s = {};
  s.noise_sigma = -1;
  EXPECT_THROW(s.validate(), InvalidInput);
}

TEST(Synth, ShapeAndValidity) {
  SynthSpec s;
  s.layers = 5;
  s.nodes_per_layer = 3;
  s.qualifiers_per_pair = 2;
  const auto inst = generate(s);
  EXPECT_TRUE(validate_graph(inst.graph).ok());
  EXPECT_EQ(inst.graph.node_count(), 2u + 3 * 3);
  EXPECT_EQ(inst.graph.edge_count(), 2u * (3 + 9 + 9 + 3));
  EXPECT_EQ(inst.scores.rows(), inst.graph.edge_count());
  EXPECT_EQ(inst.scores.columns(), s.examples_n);
  EXPECT_EQ(inst.scores.graph_ref(), inst.graph.ref());
}

TEST(Synth, NoiselessPlantedAreExactlyPositive) {
  SynthSpec s;
  s.layers = 4;
  s.nodes_per_layer = 4;
  s.planted_fraction = 0.3;
  s.seed = 5;
  const auto inst = generate(s);
  for (std::size_t e = 0; e < inst.graph.edge_count(); ++e) {
    const auto row = inst.scores.row(*inst.scores.find_row(inst.graph.edge_key(e)));
    for (double v : row) {
      if (inst.planted.contains(e)) {
        EXPECT_GT(v, 0.0);
      } else {
        EXPECT_EQ(v, 0.0);
      }
    }
  }
}

TEST(Synth, FullFractionPlantsEverything) {
  SynthSpec s;
  s.planted_fraction = 1.0;
  const auto inst = generate(s);
  EXPECT_EQ(inst.planted.size(), edge_count_on_paths(inst.graph));
}

TEST(Synth, PlantedSetIsConnected) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SynthSpec s;
    s.layers = 3 + seed % 4;
    s.nodes_per_layer = 1 + seed % 5;
    s.qualifiers_per_pair = 1 + seed % 2;
    s.planted_fraction = 0.1 + 0.15 * (seed % 5);
    s.seed = seed;
    const auto inst = generate(s);
    EXPECT_EQ(prune_to_connected(inst.graph, inst.planted), inst.planted);
    EXPECT_GE(static_cast<double>(inst.planted.size()),
              std::ceil(s.planted_fraction * inst.graph.edge_count()) - 1e-9);
  }
}

TEST(Synth, DeterministicPerSeed) {
  SynthSpec s;
  s.noise_sigma = 0.4;
  s.flip_probability = 0.3;
  s.seed = 12;
  const auto a = generate(s);
  const auto b = generate(s);
  EXPECT_EQ(io::score_matrix_to_json(a.scores), io::score_matrix_to_json(b.scores));
  EXPECT_EQ(io::graph_to_json(a.graph), io::graph_to_json(b.graph));
  EXPECT_EQ(a.planted, b.planted);
  s.seed = 13;
  EXPECT_NE(io::score_matrix_to_json(generate(s).scores), io::score_matrix_to_json(a.scores));
}

TEST(Synth, InstabilityMatchesFlipModel) {
  SynthSpec s;
  s.layers = 6;
  s.nodes_per_layer = 12;
  s.planted_fraction = 0.05;
  s.noise_sigma = 1.0;
  s.flip_probability = 0.5;
  s.examples_n = 4;
  s.seed = 99;
  const auto inst = generate(s);
  std::vector<std::string> keys;
  std::vector<double> values;
  for (std::size_t e = 0; e < inst.graph.edge_count(); ++e) {
    if (inst.planted.contains(e)) continue;
    keys.push_back(inst.graph.edge_key(e));
    const auto row = inst.scores.row(*inst.scores.find_row(keys.back()));
    values.insert(values.end(), row.begin(), row.end());
  }
  const ScoreMatrix off("x", ColumnKind::kPerExample, s.examples_n, keys, values);
  const auto r = sign_instability(off);
  const double p = s.flip_probability;
  const double expected = 1 - std::pow(p, 4) - std::pow(1 - p, 4);
  const double se = std::sqrt(expected * (1 - expected) / r.qualifying);
  EXPECT_GT(r.qualifying, 300u);
  EXPECT_NEAR(r.fraction, expected, 4 * se);
}

TEST(Synth, RunColumnsOption) {
  SynthSpec s;
  s.column_kind = ColumnKind::kPerBootstrapRun;
  EXPECT_EQ(generate(s).scores.kind(), ColumnKind::kPerBootstrapRun);
}

TEST(Synth, NoiselessIlpRecoversPlanted) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SynthSpec s;
    s.layers = 4;
    s.nodes_per_layer = 3;
    s.seed = seed;
    const auto inst = generate(s);
    const auto scores = collapse_to_scores(inst.scores);
    const auto sol = solve_exact(
        build_model(inst.graph, scores, SelectionConfig{inst.planted.size()}));
    EXPECT_EQ(sol.selected, inst.planted) << "seed " << seed;
  }
}

}  // namespace
}  // namespace circuitkit
