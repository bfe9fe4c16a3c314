#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circuitkit/graph.hpp"
#include "circuitkit/scoring.hpp"
#include "circuitkit/selection.hpp"

namespace circuitkit {

enum class RowKind {
  kBudget,           // sum x_e <= k
  kTailConsistency,  // x_(u,v,w) - y_u <= 0
  kHeadConsistency,  // x_(u,v,w) - y_v <= 0
  kOutConnectivity,  // sum_{e out of u} x_e - y_u >= 0, u != target
  kInConnectivity,   // sum_{e into v} x_e - y_v >= 0, v != source
  kPositiveRatio,    // sum_{a(e) > 0} x_e >= pnr * k
};

enum class Sense { kLessEqual, kGreaterEqual };

struct Term {
  std::size_t var;
  int coef;
};

struct ConstraintRow {
  RowKind kind;
  std::string label;
  std::vector<Term> terms;
  Sense sense;
  double rhs;
};

// Binary program over edge variables x_e (indices [0, E)) and node variables
// y_v (indices [E, E + V)). y_source and y_target are fixed to 1; edges
// excluded by filtering are fixed to 0.
struct IlpModel {
  ComputationGraph graph;
  RankMode rank_mode = RankMode::kSigned;
  std::size_t budget_k = 0;
  std::optional<double> pnr;
  std::vector<double> objective;  // per edge: a(e) or |a(e)|
  std::vector<bool> positive;     // a(e) > 0
  std::vector<bool> fixed_zero;   // per edge
  std::vector<ConstraintRow> rows;

  std::size_t edge_var_count() const { return graph.edge_count(); }
  std::size_t node_var_count() const { return graph.node_count(); }
  std::size_t node_var(NodeIndex v) const { return graph.edge_count() + v; }
  std::size_t row_count(RowKind kind) const;
};

struct SolveLimits {
  std::uint64_t max_nodes = 10'000'000;
  double max_seconds = 300.0;
};

enum class SolveStatus { kOptimal, kInfeasible, kBudgetExhausted };

std::string_view to_string(SolveStatus s);

struct IlpSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  bool has_incumbent = false;
  EdgeSet selected;
  std::vector<NodeIndex> nodes_used;
  double objective_value = 0.0;
  std::uint64_t explored_nodes = 0;
  std::vector<std::string> warnings;
};

// Relative tolerance for objective comparisons in the solver.
inline constexpr double kObjectiveRelTol = 1e-9;

IlpModel build_model(const ComputationGraph& g, const EdgeScores& scores,
                     const SelectionConfig& cfg);

// Depth-first branch and bound. Returns a proven optimum, kInfeasible, or
// kBudgetExhausted with the best incumbent found before the limit. Every
// returned assignment is audited against the model rows; an audit failure
// throws AuditFailure.
IlpSolution solve_exact(const IlpModel& model, const SolveLimits& limits = {});

// Checks every row of `model` for the assignment x = `edges`, y_v = 1 exactly
// for the source, the target and endpoints of selected edges. Returns one
// message per violated row or bound; empty means feasible.
std::vector<std::string> audit_assignment(const IlpModel& model,
                                          const EdgeSet& edges);

inline constexpr std::size_t kOracleEdgeLimit = 20;

// Exhaustive search over all edge subsets, checking the budget, endpoint,
// consistency, connectivity and positive-ratio conditions directly on the
// graph. Ties go to the lexicographically smallest sorted key list. Rejects
// graphs with more than kOracleEdgeLimit edges.
IlpSolution brute_force_oracle(const ComputationGraph& g,
                               const EdgeScores& scores,
                               const SelectionConfig& cfg);

CircuitSelection to_selection(const IlpModel& model, const IlpSolution& sol);

}  // namespace circuitkit
