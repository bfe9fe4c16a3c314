#include "circuitkit/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <set>
#include <tuple>

#include "circuitkit/error.hpp"

namespace circuitkit {
namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fingerprint(const std::vector<Node>& nodes,
                        const std::vector<Edge>& edges,
                        const std::string& source, const std::string& target) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  // 0x1e separates records, 0x1f separates fields.
  for (const auto& n : nodes) {
    h = fnv1a(h, n.id);
    h = fnv1a(h, "\x1f");
    h = fnv1a(h, std::to_string(n.layer));
    h = fnv1a(h, "\x1e");
  }
  h = fnv1a(h, "\x1d");
  for (const auto& e : edges) {
    h = fnv1a(h, e.key());
    h = fnv1a(h, "\x1e");
  }
  h = fnv1a(h, "\x1d");
  h = fnv1a(h, source);
  h = fnv1a(h, "\x1f");
  h = fnv1a(h, target);
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64-%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

bool has_separator(std::string_view s) {
  return s.find(kKeySeparator) != std::string_view::npos;
}

}  // namespace

std::string make_edge_key(std::string_view tail, std::string_view head,
                          std::string_view qualifier) {
  std::string key;
  key.reserve(tail.size() + head.size() + qualifier.size() + 2);
  key.append(tail).push_back(kKeySeparator);
  key.append(head).push_back(kKeySeparator);
  key.append(qualifier);
  return key;
}

std::string Edge::key() const { return make_edge_key(tail, head, qualifier); }

EdgeSet EdgeSet::all(std::size_t universe) {
  EdgeSet s(universe);
  s.bits_.assign(universe, true);
  s.count_ = universe;
  return s;
}

void EdgeSet::insert(EdgeIndex e) {
  if (e >= bits_.size()) throw InvalidInput("edge index out of range");
  if (!bits_[e]) {
    bits_[e] = true;
    ++count_;
  }
}

void EdgeSet::erase(EdgeIndex e) {
  if (e < bits_.size() && bits_[e]) {
    bits_[e] = false;
    --count_;
  }
}

std::vector<EdgeIndex> EdgeSet::indices() const {
  std::vector<EdgeIndex> out;
  out.reserve(count_);
  for (EdgeIndex e = 0; e < bits_.size(); ++e) {
    if (bits_[e]) out.push_back(e);
  }
  return out;
}

bool EdgeSet::is_subset_of(const EdgeSet& other) const {
  for (EdgeIndex e = 0; e < bits_.size(); ++e) {
    if (bits_[e] && !other.contains(e)) return false;
  }
  return true;
}

ComputationGraph::ComputationGraph(std::vector<Node> nodes,
                                   std::vector<Edge> edges, std::string source,
                                   std::string target)
    : nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      source_id_(std::move(source)),
      target_id_(std::move(target)) {
  for (NodeIndex v = 0; v < nodes_.size(); ++v) {
    node_lookup_.emplace(nodes_[v].id, v);  // first occurrence wins
  }
  if (auto s = find_node(source_id_)) source_ = *s;
  if (auto t = find_node(target_id_)) target_ = *t;

  out_.resize(nodes_.size());
  in_.resize(nodes_.size());
  keys_.reserve(edges_.size());
  tails_.reserve(edges_.size());
  heads_.reserve(edges_.size());
  for (EdgeIndex e = 0; e < edges_.size(); ++e) {
    keys_.push_back(edges_[e].key());
    edge_lookup_.emplace(keys_.back(), e);
    auto u = find_node(edges_[e].tail);
    auto v = find_node(edges_[e].head);
    tails_.push_back(u.value_or(kNoIndex));
    heads_.push_back(v.value_or(kNoIndex));
    if (u && v) {
      out_[*u].push_back(e);
      in_[*v].push_back(e);
    }
  }
  ref_ = fingerprint(nodes_, edges_, source_id_, target_id_);
}

std::optional<NodeIndex> ComputationGraph::find_node(std::string_view id) const {
  auto it = node_lookup_.find(std::string(id));
  if (it == node_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeIndex> ComputationGraph::find_edge(std::string_view key) const {
  auto it = edge_lookup_.find(std::string(key));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

EdgeSet ComputationGraph::edge_set(std::span<const std::string> keys) const {
  EdgeSet s(edge_count());
  for (const auto& k : keys) {
    auto e = find_edge(k);
    if (!e) throw InvalidInput("unknown edge key '" + k + "'");
    s.insert(*e);
  }
  return s;
}

std::vector<std::string> ComputationGraph::keys_of(const EdgeSet& edges) const {
  std::vector<std::string> out;
  for (EdgeIndex e : edges.indices()) out.push_back(keys_[e]);
  return out;
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::optional<std::vector<NodeIndex>> topological_order(
    const ComputationGraph& g) {
  std::vector<std::size_t> indeg(g.node_count(), 0);
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    indeg[v] = g.in_edges(v).size();
  }
  std::deque<NodeIndex> ready;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (indeg[v] == 0) ready.push_back(v);
  }
  std::vector<NodeIndex> order;
  order.reserve(g.node_count());
  while (!ready.empty()) {
    NodeIndex v = ready.front();
    ready.pop_front();
    order.push_back(v);
    for (EdgeIndex e : g.out_edges(v)) {
      if (--indeg[g.head(e)] == 0) ready.push_back(g.head(e));
    }
  }
  if (order.size() != g.node_count()) return std::nullopt;
  return order;
}

ValidationReport validate_graph(const ComputationGraph& g) {
  ValidationReport report;
  auto add = [&report](ViolationKind kind, std::string msg) {
    report.violations.push_back({kind, std::move(msg)});
  };

  const bool have_source = g.source() != kNoIndex;
  const bool have_target = g.target() != kNoIndex;
  if (!have_source) {
    add(ViolationKind::kMissingSource,
        "source '" + g.source_id() + "' is not a node");
  }
  if (!have_target) {
    add(ViolationKind::kMissingTarget,
        "target '" + g.target_id() + "' is not a node");
  }
  if (have_source && g.source() == g.target()) {
    add(ViolationKind::kSourceIsTarget, "source and target are the same node");
  }

  std::set<std::string_view> seen_nodes;
  for (const auto& n : g.nodes()) {
    if (!seen_nodes.insert(n.id).second) {
      add(ViolationKind::kDuplicateNode, "duplicate node id '" + n.id + "'");
    }
    if (has_separator(n.id)) {
      add(ViolationKind::kReservedCharacter,
          "node id '" + n.id + "' contains '|'");
    }
    if (n.layer < 0) {
      add(ViolationKind::kNegativeLayer,
          "node '" + n.id + "' has negative layer");
    }
  }

  std::set<std::tuple<std::string_view, std::string_view, std::string_view>>
      seen_edges;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edges()[e];
    const std::string& key = g.edge_key(e);
    if (has_separator(edge.qualifier)) {
      add(ViolationKind::kReservedCharacter,
          "qualifier of edge '" + key + "' contains '|'");
    }
    if (!seen_edges.emplace(edge.tail, edge.head, edge.qualifier).second) {
      add(ViolationKind::kDuplicateEdge, "duplicate edge '" + key + "'");
    }
    if (g.tail(e) == kNoIndex || g.head(e) == kNoIndex) {
      add(ViolationKind::kUnknownEndpoint,
          "edge '" + key + "' references an unknown node");
      continue;
    }
    if (g.head(e) == g.source() && have_source) {
      add(ViolationKind::kSourceHasIncoming,
          "source has incoming edge '" + key + "'");
    }
    if (g.tail(e) == g.target() && have_target) {
      add(ViolationKind::kTargetHasOutgoing,
          "target has outgoing edge '" + key + "'");
    }
    if (g.nodes()[g.tail(e)].layer >= g.nodes()[g.head(e)].layer) {
      add(ViolationKind::kLayerOrder,
          "edge '" + key + "' does not increase the layer");
    }
  }

  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    const Node& n = g.nodes()[v];
    if (v != g.source() && g.in_edges(v).empty()) {
      add(ViolationKind::kExtraRoot,
          "node '" + n.id + "' has no incoming edge but is not the source");
    }
    if (v != g.target() && g.out_edges(v).empty()) {
      add(ViolationKind::kExtraSink,
          "node '" + n.id + "' has no outgoing edge but is not the target");
    }
    if (have_source && have_target && v != g.source() && v != g.target()) {
      const int lo = g.nodes()[g.source()].layer;
      const int hi = g.nodes()[g.target()].layer;
      if (!(lo < n.layer && n.layer < hi)) {
        add(ViolationKind::kInteriorLayer,
            "node '" + n.id + "' is not strictly between source and target "
            "layers");
      }
    }
  }

  if (!topological_order(g)) {
    add(ViolationKind::kCycle, "graph contains a cycle");
  }
  return report;
}

EdgeSet prune_to_connected(const ComputationGraph& g, const EdgeSet& edges) {
  EdgeSet kept(g.edge_count());
  if (g.source() == kNoIndex || g.target() == kNoIndex) return kept;

  auto sweep = [&](NodeIndex start, bool forward) {
    std::vector<bool> reached(g.node_count(), false);
    std::deque<NodeIndex> queue{start};
    reached[start] = true;
    while (!queue.empty()) {
      NodeIndex v = queue.front();
      queue.pop_front();
      auto incident = forward ? g.out_edges(v) : g.in_edges(v);
      for (EdgeIndex e : incident) {
        if (!edges.contains(e)) continue;
        NodeIndex next = forward ? g.head(e) : g.tail(e);
        if (!reached[next]) {
          reached[next] = true;
          queue.push_back(next);
        }
      }
    }
    return reached;
  };

  const auto from_source = sweep(g.source(), true);
  const auto to_target = sweep(g.target(), false);
  for (EdgeIndex e : edges.indices()) {
    if (g.tail(e) == kNoIndex || g.head(e) == kNoIndex) continue;
    if (from_source[g.tail(e)] && to_target[g.head(e)]) kept.insert(e);
  }
  return kept;
}

std::size_t edge_count_on_paths(const ComputationGraph& g) {
  return prune_to_connected(g, EdgeSet::all(g.edge_count())).size();
}

std::vector<std::string> degree_violations(const ComputationGraph& g,
                                           const EdgeSet& edges) {
  std::vector<std::size_t> in(g.node_count(), 0), out(g.node_count(), 0);
  std::vector<bool> touched(g.node_count(), false);
  for (EdgeIndex e : edges.indices()) {
    ++out[g.tail(e)];
    ++in[g.head(e)];
    touched[g.tail(e)] = touched[g.head(e)] = true;
  }
  std::vector<std::string> problems;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (!touched[v]) continue;
    if (v != g.source() && in[v] == 0) {
      problems.push_back("node '" + g.nodes()[v].id +
                         "' has no selected incoming edge");
    }
    if (v != g.target() && out[v] == 0) {
      problems.push_back("node '" + g.nodes()[v].id +
                         "' has no selected outgoing edge");
    }
  }
  return problems;
}

}  // namespace circuitkit
