#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circuitkit/graph.hpp"
#include "circuitkit/ilp.hpp"
#include "circuitkit/metrics.hpp"
#include "circuitkit/scoring.hpp"
#include "circuitkit/selection.hpp"

namespace circuitkit {

struct SelectionOutcome {
  CircuitSelection selection;
  std::optional<IlpSolution> ilp;  // set for Strategy::kIlp
};

// Dispatches to the strategy's selection routine.
SelectionOutcome select_circuit(const ComputationGraph& g,
                                const EdgeScores& scores, Strategy method,
                                const SelectionConfig& cfg,
                                const SolveLimits& limits = {});

struct SweepConfig {
  std::vector<Strategy> methods{Strategy::kGreedy};
  RankMode rank_mode = RankMode::kSigned;
  // Applies to the pnr and ilp methods; empty means no PNR constraint.
  std::vector<double> pnr_grid;
  // Empty means the scores are used as given (no resampling).
  std::vector<std::size_t> tau_grid;
  double z = kDefaultZ;
  double threshold = 0.0;
  std::uint64_t seed = 0;
  // Explicit budgets; when empty, sweep_sizes(edges on paths, size_grid).
  std::vector<std::size_t> k_grid;
  SizeGrid size_grid;
  bool prune_after = true;
  SolveLimits limits;
  std::size_t jobs = 1;
};

struct SweepInputs {
  ComputationGraph graph;
  std::optional<ScoreMatrix> matrix;  // required when tau_grid is non-empty
  std::optional<EdgeScores> scores;   // used when no matrix is given
};

struct SweepRow {
  std::size_t cell = 0;
  Strategy method = Strategy::kGreedy;
  RankMode rank_mode = RankMode::kSigned;
  std::size_t k = 0;
  std::optional<double> pnr;
  std::optional<std::size_t> tau;
  std::string status;  // ok | optimal | infeasible | budget_exhausted | error
  std::optional<double> objective;
  std::size_t selected = 0;
  std::uint64_t explored_nodes = 0;
  std::string circuit_file;
  std::string error;
};

struct SweepReport {
  std::vector<SweepRow> rows;

  // Columns: cell,method,rank,k,pnr,tau,status,objective,selected,
  // explored_nodes,circuit_file,error
  std::string csv() const;
};

// Number of cells run_sweep will produce for `cfg` and `total_budgets`
// budgets.
std::size_t sweep_cardinality(const SweepConfig& cfg, std::size_t budgets);

// Runs every (tau, method, pnr, k) cell, writing cell_NNNN.json circuits and
// sweep.csv into `out_dir`. Cell failures are recorded in their row and do
// not stop the sweep. `provenance` is embedded in every circuit file.
// Throws InvalidInput when the configuration itself is unusable.
SweepReport run_sweep(const SweepInputs& inputs, const SweepConfig& cfg,
                      const std::filesystem::path& out_dir,
                      std::string_view provenance = {});

}  // namespace circuitkit
