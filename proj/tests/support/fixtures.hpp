#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "circuitkit/graph.hpp"
#include "circuitkit/scoring.hpp"

namespace circuitkit::testing {

// Builds a graph from "tail>head" or "tail>head>qualifier" edge specs. Nodes
// named "s" and "t" are source and target; layers come from `layers`.
inline ComputationGraph make_graph(
    const std::vector<std::pair<std::string, int>>& layers,
    const std::vector<std::string>& edges, std::string source = "s",
    std::string target = "t") {
  std::vector<Node> nodes;
  for (const auto& [id, layer] : layers) nodes.push_back({id, layer});
  std::vector<Edge> es;
  for (const auto& spec : edges) {
    const auto a = spec.find('>');
    const auto b = spec.find('>', a + 1);
    Edge e;
    e.tail = spec.substr(0, a);
    e.head = spec.substr(a + 1, b == std::string::npos ? std::string::npos : b - a - 1);
    e.qualifier = b == std::string::npos ? "" : spec.substr(b + 1);
    es.push_back(e);
  }
  return ComputationGraph(std::move(nodes), std::move(es), std::move(source),
                          std::move(target));
}

inline ComputationGraph chain() {
  return make_graph({{"s", 0}, {"a", 1}, {"t", 2}}, {"s>a", "a>t"});
}

inline ComputationGraph diamond() {
  return make_graph({{"s", 0}, {"a", 1}, {"b", 1}, {"t", 2}},
                    {"s>a", "a>t", "s>b", "b>t"});
}

// Scores in the graph's canonical edge order.
inline EdgeScores scores_for(const ComputationGraph& g,
                             const std::vector<double>& values,
                             std::vector<bool> excluded = {}) {
  EdgeScores s;
  s.graph_ref = g.ref();
  for (std::size_t e = 0; e < g.edge_count(); ++e) s.edge_keys.push_back(g.edge_key(e));
  s.values = values;
  if (excluded.empty()) excluded.assign(values.size(), false);
  s.excluded = std::move(excluded);
  return s;
}

struct RandomInstance {
  ComputationGraph graph;
  EdgeScores scores;
};

// Random valid layered DAG with at most `max_edges` edges (parallel edges and
// layer skips included) and integer scores in [-5, 5], some edges excluded.
inline RandomInstance random_instance(std::mt19937_64& rng,
                                      std::size_t max_edges) {
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  for (;;) {
    const std::size_t interior_layers = 1 + pick(3);
    std::vector<std::pair<std::string, int>> nodes{{"s", 0}};
    std::vector<std::vector<std::string>> by_layer{{"s"}};
    for (std::size_t l = 1; l <= interior_layers; ++l) {
      by_layer.emplace_back();
      const std::size_t width = 1 + pick(2);
      for (std::size_t i = 0; i < width; ++i) {
        const std::string id = "v" + std::to_string(l) + std::to_string(i);
        nodes.push_back({id, static_cast<int>(l)});
        by_layer.back().push_back(id);
      }
    }
    const int tl = static_cast<int>(interior_layers) + 1;
    nodes.push_back({"t", tl});
    by_layer.push_back({"t"});

    std::vector<std::string> edges;
    auto has = [&](const std::string& e) {
      for (const auto& x : edges) if (x == e) return true;
      return false;
    };
    auto random_below = [&](std::size_t layer) {
      const std::size_t l = pick(layer);
      return by_layer[l][pick(by_layer[l].size())];
    };
    auto random_above = [&](std::size_t layer) {
      const std::size_t l = layer + 1 + pick(by_layer.size() - layer - 1);
      return by_layer[l][pick(by_layer[l].size())];
    };
    for (std::size_t l = 1; l <= interior_layers; ++l) {
      for (const auto& v : by_layer[l]) {
        const std::string in = random_below(l) + ">" + v + ">q0";
        if (!has(in)) edges.push_back(in);
        const std::string out = v + ">" + random_above(l) + ">q0";
        if (!has(out)) edges.push_back(out);
      }
    }
    if (edges.size() > max_edges) continue;
    const std::size_t target = edges.size() + pick(max_edges - edges.size() + 1);
    for (int tries = 0; edges.size() < target && tries < 50; ++tries) {
      const std::size_t l = pick(by_layer.size() - 1);
      const std::string tail = by_layer[l][pick(by_layer[l].size())];
      const std::string e = tail + ">" + random_above(l) + ">q" + std::to_string(pick(2));
      if (!has(e)) edges.push_back(e);
    }
    ComputationGraph g = make_graph(nodes, edges);
    std::vector<double> values;
    std::vector<bool> excluded;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      values.push_back(static_cast<double>(static_cast<int>(pick(11)) - 5));
      excluded.push_back(pick(10) == 0);
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (excluded[e]) values[e] = 0.0;
    }
    EdgeScores s = scores_for(g, values, excluded);
    return {std::move(g), std::move(s)};
  }
}

}  // namespace circuitkit::testing
