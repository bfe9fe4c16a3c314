#include "circuitkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "circuitkit/error.hpp"
#include "circuitkit/random.hpp"

namespace circuitkit {
namespace {

std::string node_name(std::size_t layer, std::size_t index,
                      std::size_t layers) {
  if (layer == 0) return "src";
  if (layer + 1 == layers) return "tgt";
  return "n" + std::to_string(layer) + "." + std::to_string(index);
}

}  // namespace

void SynthSpec::validate() const {
  if (layers < 2) throw InvalidInput("synth needs layers >= 2");
  if (nodes_per_layer < 1) throw InvalidInput("synth needs width >= 1");
  if (qualifiers_per_pair < 1) throw InvalidInput("synth needs qualifiers >= 1");
  if (!(planted_fraction > 0.0 && planted_fraction <= 1.0)) {
    throw InvalidInput("planted fraction must lie in (0, 1]");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw InvalidInput("noise sigma must be >= 0");
  }
  if (!(flip_probability >= 0.0 && flip_probability <= 1.0)) {
    throw InvalidInput("flip probability must lie in [0, 1]");
  }
  if (examples_n < 1) throw InvalidInput("synth needs n >= 1");
}

SynthInstance generate(const SynthSpec& spec) {
  spec.validate();
  const std::size_t layers = spec.layers;
  auto width_of = [&](std::size_t layer) {
    return (layer == 0 || layer + 1 == layers) ? std::size_t{1}
                                                : spec.nodes_per_layer;
  };

  std::vector<Node> nodes;
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t i = 0; i < width_of(l); ++i) {
      nodes.push_back({node_name(l, i, layers), static_cast<int>(l)});
    }
  }

  // first_edge[l] indexes the block of edges leaving layer l; within a block
  // edges run tail-major, then head, then qualifier.
  std::vector<Edge> edges;
  std::vector<std::size_t> first_edge;
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    first_edge.push_back(edges.size());
    for (std::size_t a = 0; a < width_of(l); ++a) {
      for (std::size_t b = 0; b < width_of(l + 1); ++b) {
        for (std::size_t q = 0; q < spec.qualifiers_per_pair; ++q) {
          edges.push_back({node_name(l, a, layers), node_name(l + 1, b, layers),
                           "q" + std::to_string(q)});
        }
      }
    }
  }
  const std::size_t edge_total = edges.size();
  auto edge_at = [&](std::size_t l, std::size_t a, std::size_t b,
                     std::size_t q) {
    return first_edge[l] +
           (a * width_of(l + 1) + b) * spec.qualifiers_per_pair + q;
  };

  Rng rng(spec.seed);
  EdgeSet planted(edge_total);
  if (spec.planted_fraction >= 1.0) {
    planted = EdgeSet::all(edge_total);
  } else {
    const double want_raw =
        std::ceil(spec.planted_fraction * static_cast<double>(edge_total) - 1e-9);
    const std::size_t want = static_cast<std::size_t>(std::max(1.0, want_raw));
    while (planted.size() < want) {
      std::size_t at = 0;
      for (std::size_t l = 0; l + 1 < layers; ++l) {
        const std::size_t next = rng.below(width_of(l + 1));
        const std::size_t q = rng.below(spec.qualifiers_per_pair);
        planted.insert(edge_at(l, at, next, q));
        at = next;
      }
    }
  }

  ComputationGraph graph(std::move(nodes), std::move(edges),
                         node_name(0, 0, layers),
                         node_name(layers - 1, 0, layers));

  const std::size_t n = spec.examples_n;
  std::vector<std::string> keys;
  std::vector<double> values;
  keys.reserve(edge_total);
  values.reserve(edge_total * n);
  for (EdgeIndex e = 0; e < edge_total; ++e) {
    keys.push_back(graph.edge_key(e));
    if (planted.contains(e)) {
      const double mean = 1.0 + rng.uniform();
      for (std::size_t j = 0; j < n; ++j) {
        values.push_back(mean + spec.noise_sigma * rng.normal());
      }
    } else {
      const double base = rng.bernoulli(0.5) ? 1.0 : -1.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double sign = rng.bernoulli(spec.flip_probability) ? -base : base;
        const double v = sign * spec.noise_sigma * std::fabs(rng.normal());
        values.push_back(v == 0.0 ? 0.0 : v);
      }
    }
  }

  ScoreMatrix scores(graph.ref(), spec.column_kind, n, std::move(keys),
                     std::move(values));
  return {std::move(graph), std::move(scores), std::move(planted)};
}

}  // namespace circuitkit
