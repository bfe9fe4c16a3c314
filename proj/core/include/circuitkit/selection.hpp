#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circuitkit/graph.hpp"
#include "circuitkit/scoring.hpp"

namespace circuitkit {

// kSigned ranks by raw score (CPR-style); kAbsolute by magnitude (CMD-style).
enum class RankMode { kSigned, kAbsolute };
enum class Strategy { kGreedy, kTopK, kPnr, kIlp };

std::string_view to_string(RankMode mode);
std::string_view to_string(Strategy s);
std::optional<RankMode> parse_rank_mode(std::string_view s);
std::optional<Strategy> parse_strategy(std::string_view s);

struct SelectionConfig {
  std::size_t budget_k = 0;
  RankMode rank_mode = RankMode::kSigned;
  std::optional<double> pnr;
  bool prune_after = true;

  // Throws InvalidInput when pnr is outside [0, 1].
  void validate() const;
};

struct CircuitSelection {
  std::string graph_ref;
  Strategy strategy = Strategy::kTopK;
  std::size_t budget_k = 0;
  RankMode rank_mode = RankMode::kSigned;
  EdgeSet pre_prune;  // budgeted pick before connectivity pruning
  EdgeSet selected;
  double objective_value = 0.0;  // sum of rank values over `selected`
  std::vector<std::string> warnings;
};

// Number of positive edges reserved by a PNR ratio: ceil(pnr * k), with a
// 1e-9 slack so products such as 0.55 * 100 do not round up past the
// intended integer.
std::size_t pnr_quota(double pnr, std::size_t k);

double rank_value(double score, RankMode mode);

// Sum of rank values of `edges`, accumulated in canonical edge order.
double objective_of(const EdgeSet& edges, const AlignedScores& scores,
                    RankMode mode);

// Non-excluded edges sorted by (rank value desc, edge key asc).
std::vector<EdgeIndex> ranked_edges(const ComputationGraph& g,
                                    const AlignedScores& scores,
                                    RankMode mode);

CircuitSelection select_topk(const ComputationGraph& g,
                             const EdgeScores& scores,
                             const SelectionConfig& cfg);

// Phase one takes ceil(pnr * k) top positive edges by signed score; phase two
// fills the remaining budget by absolute score. A phase-one shortfall rolls
// into phase two.
CircuitSelection select_pnr(const ComputationGraph& g, const EdgeScores& scores,
                            const SelectionConfig& cfg);

// Backward greedy from the target: the admissible frontier is every edge
// whose head is already connected to the target through selected edges, and
// the best-ranked frontier edge is admitted one at a time until the budget
// is spent or the frontier is empty.
CircuitSelection select_greedy(const ComputationGraph& g,
                               const EdgeScores& scores,
                               const SelectionConfig& cfg);

}  // namespace circuitkit
