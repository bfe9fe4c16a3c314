#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace circuitkit {

using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;
inline constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

// Separator of the canonical edge key `tail|head|qualifier`. Forbidden inside
// identifiers.
inline constexpr char kKeySeparator = '|';

struct Node {
  std::string id;
  int layer = 0;
};

struct Edge {
  std::string tail;
  std::string head;
  std::string qualifier;

  std::string key() const;
};

std::string make_edge_key(std::string_view tail, std::string_view head,
                          std::string_view qualifier);

// Subset of a graph's edges, stored as a membership mask over edge indices.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t universe) : bits_(universe, false) {}

  static EdgeSet all(std::size_t universe);

  bool contains(EdgeIndex e) const { return e < bits_.size() && bits_[e]; }
  void insert(EdgeIndex e);
  void erase(EdgeIndex e);

  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::size_t universe() const { return bits_.size(); }

  // Ascending edge indices, i.e. canonical file order.
  std::vector<EdgeIndex> indices() const;

  bool is_subset_of(const EdgeSet& other) const;
  friend bool operator==(const EdgeSet& a, const EdgeSet& b) {
    return a.bits_ == b.bits_;
  }

 private:
  std::vector<bool> bits_;
  std::size_t count_ = 0;
};

// Multi-edge layered DAG with a designated source and target. The object is
// immutable after construction. Construction never rejects structural
// problems; call validate_graph() for those. Endpoints that do not name a
// node resolve to kNoIndex.
class ComputationGraph {
 public:
  ComputationGraph() = default;
  ComputationGraph(std::vector<Node> nodes, std::vector<Edge> edges,
                   std::string source, std::string target);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::string& source_id() const { return source_id_; }
  const std::string& target_id() const { return target_id_; }
  NodeIndex source() const { return source_; }
  NodeIndex target() const { return target_; }

  std::optional<NodeIndex> find_node(std::string_view id) const;
  std::optional<EdgeIndex> find_edge(std::string_view key) const;

  const std::string& edge_key(EdgeIndex e) const { return keys_[e]; }
  NodeIndex tail(EdgeIndex e) const { return tails_[e]; }
  NodeIndex head(EdgeIndex e) const { return heads_[e]; }
  std::span<const EdgeIndex> out_edges(NodeIndex v) const { return out_[v]; }
  std::span<const EdgeIndex> in_edges(NodeIndex v) const { return in_[v]; }

  // Content fingerprint of the canonical serialization; used as graph_ref.
  const std::string& ref() const { return ref_; }

  // Throws InvalidInput on keys that do not name an edge.
  EdgeSet edge_set(std::span<const std::string> keys) const;
  std::vector<std::string> keys_of(const EdgeSet& edges) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::string source_id_;
  std::string target_id_;
  NodeIndex source_ = kNoIndex;
  NodeIndex target_ = kNoIndex;

  std::vector<std::string> keys_;
  std::vector<NodeIndex> tails_;
  std::vector<NodeIndex> heads_;
  std::vector<std::vector<EdgeIndex>> out_;
  std::vector<std::vector<EdgeIndex>> in_;
  std::unordered_map<std::string, NodeIndex> node_lookup_;
  std::unordered_map<std::string, EdgeIndex> edge_lookup_;
  std::string ref_;
};

enum class ViolationKind {
  kMissingSource,
  kMissingTarget,
  kSourceIsTarget,
  kDuplicateNode,
  kReservedCharacter,
  kNegativeLayer,
  kUnknownEndpoint,
  kDuplicateEdge,
  kSourceHasIncoming,
  kTargetHasOutgoing,
  kExtraRoot,
  kExtraSink,
  kLayerOrder,
  kInteriorLayer,
  kCycle,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

ValidationReport validate_graph(const ComputationGraph& g);

// Kahn order over resolvable edges; nullopt when a cycle exists.
std::optional<std::vector<NodeIndex>> topological_order(
    const ComputationGraph& g);

// Largest subset of `edges` in which every edge lies on a source->target path
// that uses only edges of the subset.
EdgeSet prune_to_connected(const ComputationGraph& g, const EdgeSet& edges);

// Number of edges of `g` lying on at least one source->target path.
std::size_t edge_count_on_paths(const ComputationGraph& g);

// Degree-form connectivity: every node touched by `edges` other than the
// source has a selected incoming edge, and every such node other than the
// target has a selected outgoing edge. Returns one message per failure.
std::vector<std::string> degree_violations(const ComputationGraph& g,
                                           const EdgeSet& edges);

}  // namespace circuitkit
