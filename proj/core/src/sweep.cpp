#include "circuitkit/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <thread>

#include "circuitkit/error.hpp"
#include "circuitkit/io.hpp"

namespace circuitkit {
namespace {

bool uses_pnr(Strategy s) { return s == Strategy::kPnr || s == Strategy::kIlp; }

struct Cell {
  Strategy method;
  std::size_t k;
  std::optional<double> pnr;
  std::optional<std::size_t> tau;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "cell_%04zu.json", i);
  return buf;
}

}  // namespace

SelectionOutcome select_circuit(const ComputationGraph& g,
                                const EdgeScores& scores, Strategy method,
                                const SelectionConfig& cfg,
                                const SolveLimits& limits) {
  switch (method) {
    case Strategy::kTopK: return {select_topk(g, scores, cfg), std::nullopt};
    case Strategy::kPnr: return {select_pnr(g, scores, cfg), std::nullopt};
    case Strategy::kGreedy: return {select_greedy(g, scores, cfg), std::nullopt};
    case Strategy::kIlp: {
      const IlpModel model = build_model(g, scores, cfg);
      IlpSolution sol = solve_exact(model, limits);
      CircuitSelection sel = to_selection(model, sol);
      return {std::move(sel), std::move(sol)};
    }
  }
  throw InvalidInput("unknown strategy");
}

std::string SweepReport::csv() const {
  std::string out =
      "cell,method,rank,k,pnr,tau,status,objective,selected,explored_nodes,"
      "circuit_file,error\n";
  for (const auto& r : rows) {
    out += std::to_string(r.cell) + ',';
    out += std::string(to_string(r.method)) + ',';
    out += std::string(to_string(r.rank_mode)) + ',';
    out += std::to_string(r.k) + ',';
    out += (r.pnr ? io::format_number(*r.pnr) : "") + ',';
    out += (r.tau ? std::to_string(*r.tau) : "") + ',';
    out += r.status + ',';
    out += (r.objective ? io::format_number(*r.objective) : "") + ',';
    out += std::to_string(r.selected) + ',';
    out += std::to_string(r.explored_nodes) + ',';
    out += csv_field(r.circuit_file) + ',';
    out += csv_field(r.error) + '\n';
  }
  return out;
}

std::size_t sweep_cardinality(const SweepConfig& cfg, std::size_t budgets) {
  std::size_t per_tau = 0;
  for (Strategy m : cfg.methods) {
    per_tau += uses_pnr(m) && !cfg.pnr_grid.empty() ? cfg.pnr_grid.size() : 1;
  }
  const std::size_t taus = cfg.tau_grid.empty() ? 1 : cfg.tau_grid.size();
  return taus * per_tau * budgets;
}

SweepReport run_sweep(const SweepInputs& inputs, const SweepConfig& cfg,
                      const std::filesystem::path& out_dir,
                      std::string_view provenance) {
  const ComputationGraph& g = inputs.graph;
  if (cfg.methods.empty()) throw InvalidInput("sweep needs at least one method");
  for (double p : cfg.pnr_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("pnr grid values must lie in [0, 1]");
  }

  // Scores per tau value; key 0 stands for "no resampling".
  std::map<std::size_t, EdgeScores> score_sets;
  if (cfg.tau_grid.empty()) {
    if (inputs.matrix) {
      score_sets.emplace(0, collapse_to_scores(*inputs.matrix));
    } else if (inputs.scores) {
      score_sets.emplace(0, *inputs.scores);
    } else {
      throw InvalidInput("sweep needs scores");
    }
  } else {
    if (!inputs.matrix || inputs.matrix->kind() != ColumnKind::kPerExample) {
      throw InvalidInput("a tau grid needs a per_example score matrix");
    }
    for (std::size_t tau : cfg.tau_grid) {
      if (tau < 2) throw InvalidInput("tau grid values must be >= 2");
      if (score_sets.count(tau)) continue;
      auto runs = bootstrap_resample(*inputs.matrix, tau, cfg.seed);
      score_sets.emplace(tau, confidence_filter(runs, cfg.z, cfg.threshold).scores());
    }
  }

  for (std::size_t k : cfg.k_grid) {
    if (k == 0) throw InvalidInput("k grid values must be >= 1");
  }
  std::vector<std::size_t> ks = cfg.k_grid;
  if (ks.empty()) {
    const std::size_t on_paths = edge_count_on_paths(g);
    if (on_paths == 0) throw InvalidInput("graph has no source-target path");
    ks = sweep_sizes(on_paths, cfg.size_grid);
  }

  std::vector<Cell> cells;
  const std::vector<std::optional<std::size_t>> taus = [&] {
    std::vector<std::optional<std::size_t>> t;
    if (cfg.tau_grid.empty()) t.push_back(std::nullopt);
    for (std::size_t v : cfg.tau_grid) t.push_back(v);
    return t;
  }();
  for (const auto& tau : taus) {
    for (Strategy m : cfg.methods) {
      std::vector<std::optional<double>> pnrs;
      if (uses_pnr(m)) {
        for (double p : cfg.pnr_grid) pnrs.push_back(p);
      }
      if (pnrs.empty()) pnrs.push_back(std::nullopt);
      for (const auto& pnr : pnrs) {
        for (std::size_t k : ks) cells.push_back({m, k, pnr, tau});
      }
    }
  }

  std::filesystem::create_directories(out_dir);
  SweepReport report;
  report.rows.resize(cells.size());

  auto run_cell = [&](std::size_t i) {
    const Cell& c = cells[i];
    SweepRow& row = report.rows[i];
    row.cell = i;
    row.method = c.method;
    row.rank_mode = cfg.rank_mode;
    row.k = c.k;
    row.pnr = c.pnr;
    row.tau = c.tau;
    try {
      const EdgeScores& scores = score_sets.at(c.tau.value_or(0));
      SelectionConfig sc{c.k, cfg.rank_mode, c.pnr, cfg.prune_after};
      SelectionOutcome outcome = select_circuit(g, scores, c.method, sc, cfg.limits);
      const auto& sel = outcome.selection;
      row.selected = sel.selected.size();
      if (outcome.ilp) {
        row.status = std::string(to_string(outcome.ilp->status));
        row.explored_nodes = outcome.ilp->explored_nodes;
        if (outcome.ilp->has_incumbent) row.objective = sel.objective_value;
      } else {
        row.status = "ok";
        row.objective = sel.objective_value;
      }
      std::string config(provenance);
      config += "# cell " + std::to_string(i) + ": method=" +
                std::string(to_string(c.method)) + " k=" + std::to_string(c.k) +
                " pnr=" + (c.pnr ? io::format_number(*c.pnr) : "none") +
                " tau=" + (c.tau ? std::to_string(*c.tau) : "none") + "\n";
      const std::string name = cell_name(i);
      io::write_file_atomic(
          out_dir / name,
          io::circuit_to_json(g, align_scores(g, scores), sel,
                              outcome.ilp ? &*outcome.ilp : nullptr, config));
      row.circuit_file = name;
    } catch (const std::exception& ex) {
      row.status = "error";
      row.objective.reset();
      row.error = ex.what();
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
  if (jobs == 1 || cells.size() <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < std::min(jobs, cells.size()); ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
      });
    }
    for (auto& t : workers) t.join();
  }

  io::write_file_atomic(out_dir / "sweep.csv", report.csv());
  return report;
}

}  // namespace circuitkit
