#include "circuitkit/selection.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "circuitkit/error.hpp"

namespace circuitkit {
namespace {

constexpr std::string_view kNoPathWarning =
    "budget admits no complete source-target path; selection is empty after "
    "pruning";

void require_valid_graph(const ComputationGraph& g) {
  auto report = validate_graph(g);
  if (!report.ok()) {
    throw InvalidInput("invalid graph: " + report.violations.front().message);
  }
}

CircuitSelection finish(const ComputationGraph& g, const AlignedScores& scores,
                        const SelectionConfig& cfg, Strategy strategy,
                        EdgeSet picked) {
  CircuitSelection out;
  out.graph_ref = g.ref();
  out.strategy = strategy;
  out.budget_k = cfg.budget_k;
  out.rank_mode = cfg.rank_mode;
  out.selected = cfg.prune_after ? prune_to_connected(g, picked) : picked;
  out.pre_prune = std::move(picked);
  out.objective_value = objective_of(out.selected, scores, cfg.rank_mode);
  if (cfg.prune_after && out.selected.empty() && cfg.budget_k > 0) {
    out.warnings.emplace_back(kNoPathWarning);
  }
  return out;
}

void check_budget(const ComputationGraph& g, const SelectionConfig& cfg) {
  cfg.validate();
  if (cfg.budget_k > g.edge_count()) {
    throw InvalidInput("budget k = " + std::to_string(cfg.budget_k) +
                       " exceeds edge count " +
                       std::to_string(g.edge_count()));
  }
}

}  // namespace

std::string_view to_string(RankMode mode) {
  return mode == RankMode::kSigned ? "signed" : "absolute";
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kGreedy: return "greedy";
    case Strategy::kTopK: return "topk";
    case Strategy::kPnr: return "pnr";
    case Strategy::kIlp: return "ilp";
  }
  return "?";
}

std::optional<RankMode> parse_rank_mode(std::string_view s) {
  if (s == "signed") return RankMode::kSigned;
  if (s == "absolute") return RankMode::kAbsolute;
  return std::nullopt;
}

std::optional<Strategy> parse_strategy(std::string_view s) {
  if (s == "greedy") return Strategy::kGreedy;
  if (s == "topk") return Strategy::kTopK;
  if (s == "pnr") return Strategy::kPnr;
  if (s == "ilp") return Strategy::kIlp;
  return std::nullopt;
}

void SelectionConfig::validate() const {
  if (pnr && !(*pnr >= 0.0 && *pnr <= 1.0)) {
    throw InvalidInput("pnr must lie in [0, 1]");
  }
}

std::size_t pnr_quota(double pnr, std::size_t k) {
  const double raw = pnr * static_cast<double>(k);
  const double q = std::ceil(raw - 1e-9);
  return q <= 0.0 ? 0 : static_cast<std::size_t>(q);
}

double rank_value(double score, RankMode mode) {
  return mode == RankMode::kSigned ? score : std::fabs(score);
}

double objective_of(const EdgeSet& edges, const AlignedScores& scores,
                    RankMode mode) {
  double total = 0.0;
  for (EdgeIndex e : edges.indices()) {
    total += rank_value(scores.value[e], mode);
  }
  return total;
}

std::vector<EdgeIndex> ranked_edges(const ComputationGraph& g,
                                    const AlignedScores& scores,
                                    RankMode mode) {
  std::vector<EdgeIndex> order;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (!scores.excluded[e]) order.push_back(e);
  }
  std::sort(order.begin(), order.end(), [&](EdgeIndex a, EdgeIndex b) {
    const double ra = rank_value(scores.value[a], mode);
    const double rb = rank_value(scores.value[b], mode);
    if (ra != rb) return ra > rb;
    return g.edge_key(a) < g.edge_key(b);
  });
  return order;
}

CircuitSelection select_topk(const ComputationGraph& g,
                             const EdgeScores& scores,
                             const SelectionConfig& cfg) {
  check_budget(g, cfg);
  const AlignedScores aligned = align_scores(g, scores);
  EdgeSet picked(g.edge_count());
  for (EdgeIndex e : ranked_edges(g, aligned, cfg.rank_mode)) {
    if (picked.size() == cfg.budget_k) break;
    picked.insert(e);
  }
  return finish(g, aligned, cfg, Strategy::kTopK, std::move(picked));
}

CircuitSelection select_pnr(const ComputationGraph& g, const EdgeScores& scores,
                            const SelectionConfig& cfg) {
  check_budget(g, cfg);
  if (!cfg.pnr) throw InvalidInput("pnr selection requires a pnr value");
  const AlignedScores aligned = align_scores(g, scores);
  const std::size_t quota = pnr_quota(*cfg.pnr, cfg.budget_k);

  EdgeSet picked(g.edge_count());
  for (EdgeIndex e : ranked_edges(g, aligned, RankMode::kSigned)) {
    if (picked.size() == quota || !(aligned.value[e] > 0.0)) break;
    picked.insert(e);
  }
  for (EdgeIndex e : ranked_edges(g, aligned, RankMode::kAbsolute)) {
    if (picked.size() == cfg.budget_k) break;
    picked.insert(e);
  }
  return finish(g, aligned, cfg, Strategy::kPnr, std::move(picked));
}

CircuitSelection select_greedy(const ComputationGraph& g,
                               const EdgeScores& scores,
                               const SelectionConfig& cfg) {
  check_budget(g, cfg);
  if (cfg.budget_k < 1) throw InvalidInput("greedy selection needs k >= 1");
  require_valid_graph(g);
  const AlignedScores aligned = align_scores(g, scores);

  auto better = [&](EdgeIndex a, EdgeIndex b) {
    const double ra = rank_value(aligned.value[a], cfg.rank_mode);
    const double rb = rank_value(aligned.value[b], cfg.rank_mode);
    if (ra != rb) return ra > rb;
    return g.edge_key(a) < g.edge_key(b);
  };
  std::set<EdgeIndex, decltype(better)> frontier(better);
  std::vector<bool> connected(g.node_count(), false);

  auto connect = [&](NodeIndex v) {
    if (connected[v]) return;
    connected[v] = true;
    for (EdgeIndex e : g.in_edges(v)) {
      if (!aligned.excluded[e]) frontier.insert(e);
    }
  };

  EdgeSet picked(g.edge_count());
  connect(g.target());
  while (picked.size() < cfg.budget_k && !frontier.empty()) {
    const EdgeIndex e = *frontier.begin();
    frontier.erase(frontier.begin());
    picked.insert(e);
    connect(g.tail(e));
  }
  return finish(g, aligned, cfg, Strategy::kGreedy, std::move(picked));
}

}  // namespace circuitkit
