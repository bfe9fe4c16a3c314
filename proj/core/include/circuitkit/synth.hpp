#pragma once

#include <cstddef>
#include <cstdint>

#include "circuitkit/graph.hpp"
#include "circuitkit/scoring.hpp"

namespace circuitkit {

// Parameters of a synthetic layered instance.
//
// The graph has `layers` strata: a source at layer 0, a target at layer
// layers - 1 and `nodes_per_layer` nodes on every stratum in between.
// Adjacent strata are completely connected with `qualifiers_per_pair`
// parallel edges per node pair.
//
// Planted edges are a union of random source-to-target paths covering at
// least ceil(planted_fraction * |E|) edges. Each planted edge has a mean m
// drawn uniformly from [1, 2) and per-column value m + noise_sigma * N(0, 1).
//
// Every other edge gets a base sign b = +-1 (fair coin) and per-column value
// s * noise_sigma * |N(0, 1)|, where s = b flipped with probability
// flip_probability. At flip_probability 0.5 such edges are zero mean; at 0
// their sign never changes.
struct SynthSpec {
  std::size_t layers = 4;
  std::size_t nodes_per_layer = 3;
  std::size_t qualifiers_per_pair = 1;
  double planted_fraction = 0.2;
  double noise_sigma = 0.0;
  double flip_probability = 0.0;
  std::size_t examples_n = 8;
  std::uint64_t seed = 0;
  // Columns are labelled per_example by default. kPerBootstrapRun emits
  // them as independent upstream bootstrap runs instead.
  ColumnKind column_kind = ColumnKind::kPerExample;

  void validate() const;
};

struct SynthInstance {
  ComputationGraph graph;
  ScoreMatrix scores;
  EdgeSet planted;
};

SynthInstance generate(const SynthSpec& spec);

}  // namespace circuitkit
