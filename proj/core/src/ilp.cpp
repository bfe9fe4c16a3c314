#include "circuitkit/ilp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "circuitkit/error.hpp"

namespace circuitkit {
namespace {

double tolerance_for(double reference) {
  return kObjectiveRelTol * std::max(1.0, std::fabs(reference));
}

double canonical_objective(const std::vector<double>& coef,
                           const EdgeSet& edges) {
  double total = 0.0;
  for (EdgeIndex e : edges.indices()) total += coef[e];
  return total;
}

std::vector<NodeIndex> used_nodes(const ComputationGraph& g,
                                  const EdgeSet& edges) {
  std::vector<bool> used(g.node_count(), false);
  used[g.source()] = used[g.target()] = true;
  for (EdgeIndex e : edges.indices()) used[g.tail(e)] = used[g.head(e)] = true;
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (used[v]) out.push_back(v);
  }
  return out;
}

class BranchAndBound {
 public:
  BranchAndBound(const IlpModel& model, const SolveLimits& limits)
      : m_(model),
        g_(model.graph),
        limits_(limits),
        state_(g_.edge_count(), State::kFree),
        din_(g_.node_count(), 0),
        dout_(g_.node_count(), 0),
        fwd_(g_.node_count(), false),
        bwd_(g_.node_count(), false),
        best_set_(g_.edge_count()) {
    for (EdgeIndex e = 0; e < g_.edge_count(); ++e) {
      if (m_.fixed_zero[e]) {
        state_[e] = State::kOut;
      } else {
        order_.push_back(e);
      }
    }
    std::sort(order_.begin(), order_.end(), [&](EdgeIndex a, EdgeIndex b) {
      const double ca = std::fabs(m_.objective[a]);
      const double cb = std::fabs(m_.objective[b]);
      if (ca != cb) return ca > cb;
      return g_.edge_key(a) < g_.edge_key(b);
    });
    quota_ = m_.pnr ? pnr_quota(*m_.pnr, m_.budget_k) : 0;
  }

  IlpSolution run() {
    start_ = std::chrono::steady_clock::now();
    search(0);

    IlpSolution sol;
    sol.explored_nodes = explored_;
    sol.has_incumbent = have_incumbent_;
    if (stopped_) {
      sol.status = SolveStatus::kBudgetExhausted;
    } else {
      sol.status =
          have_incumbent_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
    }
    if (have_incumbent_) {
      sol.selected = best_set_;
      sol.objective_value = canonical_objective(m_.objective, best_set_);
      sol.nodes_used = used_nodes(g_, best_set_);
    } else {
      sol.selected = EdgeSet(g_.edge_count());
    }
    return sol;
  }

 private:
  enum class State : unsigned char { kFree, kIn, kOut };

  bool out_of_budget() {
    if (explored_ >= limits_.max_nodes) return true;
    if ((explored_ & 1023) == 0) {
      const std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start_;
      if (elapsed.count() >= limits_.max_seconds) return true;
    }
    return false;
  }

  // Nodes reachable from the source / reaching the target over edges that
  // are not excluded.
  void compute_reach() {
    auto sweep = [&](NodeIndex start, bool forward, std::vector<bool>& seen) {
      std::fill(seen.begin(), seen.end(), false);
      queue_.clear();
      queue_.push_back(start);
      seen[start] = true;
      for (std::size_t i = 0; i < queue_.size(); ++i) {
        const NodeIndex v = queue_[i];
        for (EdgeIndex e : forward ? g_.out_edges(v) : g_.in_edges(v)) {
          if (state_[e] == State::kOut) continue;
          const NodeIndex w = forward ? g_.head(e) : g_.tail(e);
          if (!seen[w]) {
            seen[w] = true;
            queue_.push_back(w);
          }
        }
      }
    };
    sweep(g_.source(), true, fwd_);
    sweep(g_.target(), false, bwd_);
  }

  bool usable(EdgeIndex e) const { return fwd_[g_.tail(e)] && bwd_[g_.head(e)]; }

  void set_in(EdgeIndex e) {
    state_[e] = State::kIn;
    chosen_.push_back(e);
    ++din_[g_.head(e)];
    ++dout_[g_.tail(e)];
    if (m_.positive[e]) ++pos_in_;
    sum_in_ += m_.objective[e];
  }

  void unset_in(EdgeIndex e) {
    state_[e] = State::kFree;
    chosen_.pop_back();
    --din_[g_.head(e)];
    --dout_[g_.tail(e)];
    if (m_.positive[e]) --pos_in_;
    sum_in_ -= m_.objective[e];
  }

  void offer_incumbent() {
    if (have_incumbent_ && !(sum_in_ > best_ + tolerance_for(best_))) return;
    have_incumbent_ = true;
    best_ = sum_in_;
    best_set_ = EdgeSet(g_.edge_count());
    for (EdgeIndex e : chosen_) best_set_.insert(e);
  }

  void search(std::size_t pos) {
    if (stopped_) return;
    if (out_of_budget()) {
      stopped_ = true;
      return;
    }
    ++explored_;

    compute_reach();
    if (!fwd_[g_.target()]) return;
    for (EdgeIndex e : chosen_) {
      if (!usable(e)) return;
    }

    // Every touched node lacking an in (out) edge needs a distinct new edge
    // heading into (out of) it.
    std::size_t in_def = 0;
    std::size_t out_def = 0;
    for (NodeIndex v = 0; v < g_.node_count(); ++v) {
      const bool touched = din_[v] + dout_[v] > 0 || v == g_.source() ||
                           v == g_.target();
      if (!touched) continue;
      if (v != g_.source() && din_[v] == 0) ++in_def;
      if (v != g_.target() && dout_[v] == 0) ++out_def;
    }
    const std::size_t slots = m_.budget_k - chosen_.size();
    if (std::max(in_def, out_def) > slots) return;

    std::size_t free_positive = 0;
    double bound = sum_in_;
    std::size_t bound_terms = 0;
    for (std::size_t i = pos; i < order_.size(); ++i) {
      const EdgeIndex e = order_[i];
      if (state_[e] != State::kFree || !usable(e)) continue;
      if (m_.positive[e]) ++free_positive;
      if (m_.objective[e] > 0.0 && bound_terms < slots) {
        bound += m_.objective[e];
        ++bound_terms;
      }
    }
    if (pos_in_ < quota_) {
      const std::size_t missing = quota_ - pos_in_;
      if (missing > slots || missing > free_positive) return;
    }

    if (in_def == 0 && out_def == 0 && pos_in_ >= quota_) offer_incumbent();
    if (slots == 0) return;
    if (have_incumbent_ && bound <= best_ + tolerance_for(best_)) return;

    // Free edges that are no longer usable stay unusable deeper down.
    std::vector<EdgeIndex> skipped;
    std::size_t p = pos;
    while (p < order_.size() &&
           (state_[order_[p]] != State::kFree || !usable(order_[p]))) {
      if (state_[order_[p]] == State::kFree) {
        state_[order_[p]] = State::kOut;
        skipped.push_back(order_[p]);
      }
      ++p;
    }
    if (p < order_.size()) {
      const EdgeIndex e = order_[p];
      set_in(e);
      search(p + 1);
      unset_in(e);
      state_[e] = State::kOut;
      search(p + 1);
      state_[e] = State::kFree;
    }
    for (EdgeIndex e : skipped) state_[e] = State::kFree;
  }

  const IlpModel& m_;
  const ComputationGraph& g_;
  SolveLimits limits_;
  std::vector<EdgeIndex> order_;
  std::vector<State> state_;
  std::vector<std::size_t> din_;
  std::vector<std::size_t> dout_;
  std::vector<bool> fwd_;
  std::vector<bool> bwd_;
  std::vector<NodeIndex> queue_;
  std::vector<EdgeIndex> chosen_;
  std::size_t pos_in_ = 0;
  std::size_t quota_ = 0;
  double sum_in_ = 0.0;

  bool have_incumbent_ = false;
  double best_ = -std::numeric_limits<double>::infinity();
  EdgeSet best_set_;

  std::uint64_t explored_ = 0;
  bool stopped_ = false;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kBudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

std::size_t IlpModel::row_count(RowKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(),
                    [kind](const ConstraintRow& r) { return r.kind == kind; }));
}

IlpModel build_model(const ComputationGraph& g, const EdgeScores& scores,
                     const SelectionConfig& cfg) {
  cfg.validate();
  if (cfg.budget_k < 1) throw InvalidInput("ilp selection needs k >= 1");
  auto report = validate_graph(g);
  if (!report.ok()) {
    throw InvalidInput("invalid graph: " + report.violations.front().message);
  }
  const AlignedScores aligned = align_scores(g, scores);

  IlpModel m;
  m.graph = g;
  m.rank_mode = cfg.rank_mode;
  m.budget_k = cfg.budget_k;
  m.pnr = cfg.pnr;
  m.objective.resize(g.edge_count());
  m.positive.resize(g.edge_count());
  m.fixed_zero = aligned.excluded;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    m.objective[e] = rank_value(aligned.value[e], cfg.rank_mode);
    m.positive[e] = aligned.value[e] > 0.0;
  }

  ConstraintRow budget{RowKind::kBudget, "budget", {}, Sense::kLessEqual,
                       static_cast<double>(cfg.budget_k)};
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) budget.terms.push_back({e, 1});
  m.rows.push_back(std::move(budget));

  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    m.rows.push_back({RowKind::kTailConsistency,
                      "tail:" + g.edge_key(e),
                      {{e, 1}, {m.node_var(g.tail(e)), -1}},
                      Sense::kLessEqual,
                      0.0});
    m.rows.push_back({RowKind::kHeadConsistency,
                      "head:" + g.edge_key(e),
                      {{e, 1}, {m.node_var(g.head(e)), -1}},
                      Sense::kLessEqual,
                      0.0});
  }

  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    const std::string& id = g.nodes()[v].id;
    if (v != g.target()) {
      ConstraintRow row{RowKind::kOutConnectivity, "out:" + id, {},
                        Sense::kGreaterEqual, 0.0};
      for (EdgeIndex e : g.out_edges(v)) row.terms.push_back({e, 1});
      row.terms.push_back({m.node_var(v), -1});
      m.rows.push_back(std::move(row));
    }
    if (v != g.source()) {
      ConstraintRow row{RowKind::kInConnectivity, "in:" + id, {},
                        Sense::kGreaterEqual, 0.0};
      for (EdgeIndex e : g.in_edges(v)) row.terms.push_back({e, 1});
      row.terms.push_back({m.node_var(v), -1});
      m.rows.push_back(std::move(row));
    }
  }

  if (cfg.pnr) {
    ConstraintRow row{RowKind::kPositiveRatio, "pnr", {}, Sense::kGreaterEqual,
                      *cfg.pnr * static_cast<double>(cfg.budget_k)};
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
      if (m.positive[e]) row.terms.push_back({e, 1});
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

std::vector<std::string> audit_assignment(const IlpModel& model,
                                          const EdgeSet& edges) {
  const ComputationGraph& g = model.graph;
  std::vector<int> value(model.edge_var_count() + model.node_var_count(), 0);
  for (EdgeIndex e : edges.indices()) value[e] = 1;
  for (NodeIndex v : used_nodes(g, edges)) value[model.node_var(v)] = 1;

  std::vector<std::string> problems;
  for (EdgeIndex e : edges.indices()) {
    if (model.fixed_zero[e]) {
      problems.push_back("excluded edge '" + g.edge_key(e) + "' selected");
    }
  }
  // The PNR right-hand side is real-valued; a 1e-9 slack absorbs products
  // like 0.55 * 100 that land a hair above an integer.
  for (const auto& row : model.rows) {
    long long lhs = 0;
    for (const auto& t : row.terms) lhs += static_cast<long long>(t.coef) * value[t.var];
    const double l = static_cast<double>(lhs);
    const bool ok = row.sense == Sense::kLessEqual ? l <= row.rhs + 1e-9
                                                   : l >= row.rhs - 1e-9;
    if (!ok) problems.push_back("row '" + row.label + "' violated");
  }
  return problems;
}

IlpSolution solve_exact(const IlpModel& model, const SolveLimits& limits) {
  IlpSolution sol = BranchAndBound(model, limits).run();
  if (sol.has_incumbent) {
    auto problems = audit_assignment(model, sol.selected);
    if (!problems.empty()) {
      throw AuditFailure("solver returned an infeasible assignment: " +
                         problems.front());
    }
    if (!(prune_to_connected(model.graph, sol.selected) == sol.selected)) {
      sol.warnings.push_back(
          "solution contains edges that lie on no selected source-target path");
    }
  }
  if (sol.status == SolveStatus::kBudgetExhausted) {
    sol.warnings.push_back(sol.has_incumbent
                               ? "solver limit reached; incumbent not proven "
                                 "optimal"
                               : "solver limit reached before any feasible "
                                 "solution was found");
  }
  return sol;
}

IlpSolution brute_force_oracle(const ComputationGraph& g,
                               const EdgeScores& scores,
                               const SelectionConfig& cfg) {
  cfg.validate();
  if (g.edge_count() > kOracleEdgeLimit) {
    throw InvalidInput("brute-force oracle is limited to " +
                       std::to_string(kOracleEdgeLimit) + " edges");
  }
  if (!validate_graph(g).ok()) throw InvalidInput("invalid graph");
  const AlignedScores aligned = align_scores(g, scores);
  const std::size_t n = g.edge_count();

  std::vector<double> coef(n);
  for (EdgeIndex e = 0; e < n; ++e) coef[e] = rank_value(aligned.value[e], cfg.rank_mode);

  IlpSolution best;
  best.status = SolveStatus::kInfeasible;
  std::vector<std::string> best_keys;
  std::vector<int> in(g.node_count()), out(g.node_count());

  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    EdgeSet x(n);
    std::size_t count = 0;
    std::size_t positives = 0;
    bool excluded_hit = false;
    std::fill(in.begin(), in.end(), 0);
    std::fill(out.begin(), out.end(), 0);
    for (EdgeIndex e = 0; e < n; ++e) {
      if (!(mask >> e & 1u)) continue;
      excluded_hit = excluded_hit || aligned.excluded[e];
      x.insert(e);
      ++count;
      positives += aligned.value[e] > 0.0;
      ++out[g.tail(e)];
      ++in[g.head(e)];
    }
    if (excluded_hit || count > cfg.budget_k) continue;
    if (cfg.pnr && static_cast<double>(positives) + 1e-9 <
                       *cfg.pnr * static_cast<double>(cfg.budget_k)) {
      continue;
    }
    // y_v = 1 for source, target and every endpoint of a selected edge;
    // consistency then holds by construction.
    bool connected = true;
    for (NodeIndex v = 0; v < g.node_count() && connected; ++v) {
      const bool used = v == g.source() || v == g.target() || in[v] + out[v] > 0;
      if (!used) continue;
      if (v != g.target() && out[v] == 0) connected = false;
      if (v != g.source() && in[v] == 0) connected = false;
    }
    if (!connected) continue;

    const double value = canonical_objective(coef, x);
    auto keys = g.keys_of(x);
    std::sort(keys.begin(), keys.end());
    const bool better = !best.has_incumbent || value > best.objective_value ||
                        (value == best.objective_value && keys < best_keys);
    if (better) {
      best.has_incumbent = true;
      best.status = SolveStatus::kOptimal;
      best.objective_value = value;
      best.selected = x;
      best_keys = std::move(keys);
    }
    ++best.explored_nodes;
  }
  if (best.has_incumbent) {
    best.nodes_used = used_nodes(g, best.selected);
  } else {
    best.selected = EdgeSet(n);
  }
  return best;
}

CircuitSelection to_selection(const IlpModel& model, const IlpSolution& sol) {
  CircuitSelection out;
  out.graph_ref = model.graph.ref();
  out.strategy = Strategy::kIlp;
  out.budget_k = model.budget_k;
  out.rank_mode = model.rank_mode;
  out.pre_prune = sol.selected;
  out.selected = sol.selected;
  out.objective_value = sol.objective_value;
  out.warnings = sol.warnings;
  return out;
}

}  // namespace circuitkit
