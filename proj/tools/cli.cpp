#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "circuitkit/error.hpp"
#include "circuitkit/graph.hpp"
#include "circuitkit/ilp.hpp"
#include "circuitkit/io.hpp"
#include "circuitkit/metrics.hpp"
#include "circuitkit/scoring.hpp"
#include "circuitkit/selection.hpp"
#include "circuitkit/sweep.hpp"
#include "circuitkit/synth.hpp"

namespace circuitkit::cli {
namespace {

namespace fs = std::filesystem;

const std::map<std::string, Strategy> kStrategies{{"greedy", Strategy::kGreedy},
                                                  {"topk", Strategy::kTopK},
                                                  {"pnr", Strategy::kPnr},
                                                  {"ilp", Strategy::kIlp}};
const std::map<std::string, RankMode> kRanks{{"signed", RankMode::kSigned},
                                             {"absolute", RankMode::kAbsolute}};

// Resolved options of `sub` as a config file that --config can replay.
// Unset list options are dropped so they stay unset on replay.
std::string provenance(const CLI::App* sub) {
  std::istringstream lines(sub->config_to_str(true, false));
  std::string out = "[" + sub->get_name() + "]\n";
  for (std::string line; std::getline(lines, line);) {
    if (line.size() >= 3 && line.compare(line.size() - 3, 3, "=\"\"") == 0) continue;
    out += line + "\n";
  }
  return out;
}

bool is_matrix_file(const std::string& text) {
  // Both score formats are objects; only the matrix carries column_kind.
  return text.find("\"column_kind\"") != std::string::npos;
}

void note_graph_ref(const ComputationGraph& g, const std::string& scores_ref,
                    std::vector<std::string>& warnings) {
  if (!scores_ref.empty() && scores_ref != g.ref()) {
    warnings.push_back("scores graph_ref '" + scores_ref +
                       "' does not match graph fingerprint '" + g.ref() + "'");
  }
}

struct ValidateArgs {
  std::string graph;
};

int do_validate(const ValidateArgs& a, std::ostream& out) {
  const ComputationGraph g = io::parse_graph(io::read_file(a.graph));
  const ValidationReport report = validate_graph(g);
  if (report.ok()) {
    out << "valid: " << g.node_count() << " nodes, " << g.edge_count()
        << " edges, " << edge_count_on_paths(g) << " on source-target paths\n"
        << "graph_ref: " << g.ref() << "\n";
    return kOk;
  }
  for (const auto& v : report.violations) out << "violation: " << v.message << "\n";
  return kInvalidInput;
}

struct FilterArgs {
  std::string scores;
  std::string out;
  std::string runs_out;
  std::size_t tau = 10;
  double z = kDefaultZ;
  double threshold = 0.0;
  std::uint64_t seed = 0;
};

int do_filter(const FilterArgs& a, const CLI::App* sub, std::ostream& out) {
  ScoreMatrix m = io::parse_score_matrix(io::read_file(a.scores));
  if (m.kind() == ColumnKind::kPerExample) {
    m = bootstrap_resample(m, a.tau, a.seed);
    if (!a.runs_out.empty()) {
      io::write_file_atomic(a.runs_out, io::score_matrix_to_json(m));
    }
  }
  const BootstrapSummary summary = confidence_filter(m, a.z, a.threshold);
  io::write_file_atomic(a.out, io::summary_to_json(summary, provenance(sub)));
  const auto retained = std::count_if(summary.records.begin(), summary.records.end(),
                                      [](const EdgeInterval& r) { return r.retained; });
  out << "retained " << retained << " of " << summary.records.size()
      << " edges (tau=" << summary.tau << ")\n";
  return kOk;
}

struct SelectArgs {
  std::string method = "greedy";
  std::string rank = "signed";
  std::size_t k = 0;
  double pnr = 0.0;
  bool no_prune = false;
  std::string graph;
  std::string scores;
  std::string out;
  std::uint64_t max_nodes = SolveLimits{}.max_nodes;
  double max_seconds = SolveLimits{}.max_seconds;
};

int do_select(const SelectArgs& a, bool has_pnr, const CLI::App* sub,
              std::ostream& out) {
  const ComputationGraph g = io::parse_graph(io::read_file(a.graph));
  const EdgeScores scores = io::parse_edge_scores(io::read_file(a.scores));
  SelectionConfig cfg{a.k, kRanks.at(a.rank), std::nullopt, !a.no_prune};
  if (has_pnr) cfg.pnr = a.pnr;
  const SolveLimits limits{a.max_nodes, a.max_seconds};

  SelectionOutcome outcome =
      select_circuit(g, scores, kStrategies.at(a.method), cfg, limits);
  note_graph_ref(g, scores.graph_ref, outcome.selection.warnings);
  io::write_file_atomic(
      a.out, io::circuit_to_json(g, align_scores(g, scores), outcome.selection,
                                 outcome.ilp ? &*outcome.ilp : nullptr,
                                 provenance(sub)));

  out << a.method << " k=" << a.k << ": " << outcome.selection.selected.size()
      << " edges";
  if (outcome.ilp) out << ", status " << to_string(outcome.ilp->status);
  if (!outcome.ilp || outcome.ilp->has_incumbent) {
    out << ", objective " << io::format_number(outcome.selection.objective_value);
  }
  out << "\n";
  if (outcome.ilp) {
    if (outcome.ilp->status == SolveStatus::kInfeasible) return kInfeasible;
    if (outcome.ilp->status == SolveStatus::kBudgetExhausted) return kSolverLimit;
  }
  return kOk;
}

struct SweepArgs {
  std::string graph;
  std::string scores;
  std::string out_dir;
  std::vector<std::string> methods{"greedy"};
  std::string rank = "signed";
  std::vector<double> pnr_grid;
  std::vector<std::size_t> tau_grid;
  std::vector<std::size_t> k_grid;
  std::vector<double> fractions;
  std::size_t log_points = SizeGrid{}.log_points;
  double min_fraction = SizeGrid{}.min_fraction;
  double z = kDefaultZ;
  double threshold = 0.0;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  bool no_prune = false;
  std::uint64_t max_nodes = SolveLimits{}.max_nodes;
  double max_seconds = SolveLimits{}.max_seconds;
};

int do_sweep(const SweepArgs& a, const CLI::App* sub, std::ostream& out) {
  SweepInputs inputs;
  inputs.graph = io::parse_graph(io::read_file(a.graph));
  const std::string text = io::read_file(a.scores);
  if (is_matrix_file(text)) {
    inputs.matrix = io::parse_score_matrix(text);
  } else {
    inputs.scores = io::parse_edge_scores(text);
  }

  SweepConfig cfg;
  cfg.methods.clear();
  for (const auto& m : a.methods) cfg.methods.push_back(kStrategies.at(m));
  cfg.rank_mode = kRanks.at(a.rank);
  cfg.pnr_grid = a.pnr_grid;
  cfg.tau_grid = a.tau_grid;
  cfg.z = a.z;
  cfg.threshold = a.threshold;
  cfg.seed = a.seed;
  cfg.k_grid = a.k_grid;
  cfg.size_grid.fractions = a.fractions;
  cfg.size_grid.log_points = a.log_points;
  cfg.size_grid.min_fraction = a.min_fraction;
  cfg.prune_after = !a.no_prune;
  cfg.limits = {a.max_nodes, a.max_seconds};
  cfg.jobs = a.jobs;

  const std::string config = provenance(sub);
  fs::create_directories(a.out_dir);
  io::write_file_atomic(fs::path(a.out_dir) / "sweep_config.toml", config);
  const SweepReport report = run_sweep(inputs, cfg, a.out_dir, config);
  const auto failed = std::count_if(report.rows.begin(), report.rows.end(),
                                    [](const SweepRow& r) { return r.status == "error"; });
  out << "sweep: " << report.rows.size() << " cells, " << failed
      << " failed; wrote " << (fs::path(a.out_dir) / "sweep.csv").string() << "\n";
  return kOk;
}

struct StatsArgs {
  std::string scores;
  std::string out;
  double mu_floor = kDefaultMuFloor;
};

int do_stats(const StatsArgs& a, const CLI::App* sub, std::ostream& out) {
  const ScoreMatrix m = io::parse_score_matrix(io::read_file(a.scores));
  const InstabilityReport r = sign_instability(m, a.mu_floor);
  if (!a.out.empty()) {
    io::write_file_atomic(a.out, io::instability_to_json(r, provenance(sub)));
  }
  out << "sign-unstable: " << r.unstable << " of " << r.qualifying
      << " qualifying edges, fraction " << io::format_number(r.fraction) << "\n";
  return kOk;
}

struct SynthArgs {
  SynthSpec spec;
  bool runs = false;
  std::string out_prefix;
};

int do_synth(SynthArgs a, const CLI::App* sub, std::ostream& out) {
  if (a.runs) a.spec.column_kind = ColumnKind::kPerBootstrapRun;
  const SynthInstance inst = generate(a.spec);
  const std::string config = provenance(sub);
  const std::string prefix = a.out_prefix;
  io::write_file_atomic(prefix + ".graph.json", io::graph_to_json(inst.graph));
  io::write_file_atomic(prefix + ".scores.json",
                        io::score_matrix_to_json(inst.scores));
  io::write_file_atomic(prefix + ".planted.json",
                        io::edge_list_to_json(inst.graph, inst.planted));
  io::write_file_atomic(prefix + ".config.toml", config);
  out << "synth: " << inst.graph.node_count() << " nodes, "
      << inst.graph.edge_count() << " edges, " << inst.planted.size()
      << " planted\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Circuit selection from edge attribution scores"};
  app.name("circuitkit");
  app.require_subcommand(1);
  app.set_config("--config", "", "Run configuration (TOML/INI); flags override it");

  std::function<int()> action;

  ValidateArgs validate;
  auto* v = app.add_subcommand("validate", "Check a graph's structural invariants");
  v->add_option("--graph", validate.graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  v->callback([&] { action = [&] { return do_validate(validate, out); }; });

  FilterArgs filter;
  auto* f = app.add_subcommand("bootstrap-filter",
                               "Bootstrap per-example scores and keep edges whose "
                               "confidence interval clears the threshold");
  f->add_option("--scores", filter.scores, "Score matrix JSON")->required()->check(CLI::ExistingFile);
  f->add_option("--tau", filter.tau, "Bootstrap runs (per_example input only)")
      ->capture_default_str()->check(CLI::Range(2, 1000000));
  f->add_option("--z", filter.z, "Normal quantile")->capture_default_str()->check(CLI::PositiveNumber);
  f->add_option("--threshold", filter.threshold, "Significance threshold")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  f->add_option("--seed", filter.seed, "Resampling seed")->capture_default_str();
  f->add_option("--out", filter.out, "Summary JSON output")->required();
  f->add_option("--runs-out", filter.runs_out, "Also write the resampled run matrix");
  f->callback([&] { action = [&] { return do_filter(filter, f, out); }; });

  SelectArgs select;
  auto* s = app.add_subcommand("select", "Select a circuit under an edge budget");
  s->add_option("--method", select.method, "greedy|topk|pnr|ilp")
      ->capture_default_str()->check(CLI::IsMember({"greedy", "topk", "pnr", "ilp"}));
  s->add_option("--k", select.k, "Edge budget")->required();
  s->add_option("--rank", select.rank, "signed|absolute")
      ->capture_default_str()->check(CLI::IsMember({"signed", "absolute"}));
  auto* pnr_opt = s->add_option("--pnr", select.pnr, "Positive-edge ratio in [0, 1]")
                      ->check(CLI::Range(0.0, 1.0));
  s->add_flag("--no-prune", select.no_prune, "Skip connectivity pruning");
  s->add_option("--graph", select.graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  s->add_option("--scores", select.scores, "Score matrix or bootstrap summary JSON")
      ->required()->check(CLI::ExistingFile);
  s->add_option("--out", select.out, "Circuit JSON output")->required();
  s->add_option("--max-nodes", select.max_nodes, "ILP node limit")->capture_default_str();
  s->add_option("--max-seconds", select.max_seconds, "ILP time limit")->capture_default_str();
  s->callback([&] {
    action = [&] { return do_select(select, pnr_opt->count() > 0, s, out); };
  });

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Run a hyper-parameter grid and write a CSV");
  w->add_option("--graph", sweep.graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  w->add_option("--scores", sweep.scores, "Score matrix or bootstrap summary JSON")
      ->required()->check(CLI::ExistingFile);
  w->add_option("--out-dir", sweep.out_dir, "Output directory")->required();
  w->add_option("--methods", sweep.methods, "Methods to run")
      ->capture_default_str()->check(CLI::IsMember({"greedy", "topk", "pnr", "ilp"}));
  w->add_option("--rank", sweep.rank, "signed|absolute")
      ->capture_default_str()->check(CLI::IsMember({"signed", "absolute"}));
  w->add_option("--pnr-grid", sweep.pnr_grid, "PNR values (pnr and ilp methods)")
      ->check(CLI::Range(0.0, 1.0));
  w->add_option("--tau-grid", sweep.tau_grid, "Bootstrap run counts")->check(CLI::Range(2, 1000000));
  w->add_option("--k-grid", sweep.k_grid, "Explicit edge budgets");
  w->add_option("--fractions", sweep.fractions, "Budget fractions of on-path edges");
  w->add_option("--log-points", sweep.log_points, "Log-spaced budget count")->capture_default_str();
  w->add_option("--min-fraction", sweep.min_fraction, "Smallest log-spaced fraction")
      ->capture_default_str();
  w->add_option("--z", sweep.z, "Normal quantile")->capture_default_str()->check(CLI::PositiveNumber);
  w->add_option("--threshold", sweep.threshold, "Significance threshold")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  w->add_option("--seed", sweep.seed, "Resampling seed")->capture_default_str();
  w->add_option("--jobs", sweep.jobs, "Concurrent cells")->capture_default_str()->check(CLI::Range(1, 1024));
  w->add_flag("--no-prune", sweep.no_prune, "Skip connectivity pruning");
  w->add_option("--max-nodes", sweep.max_nodes, "ILP node limit")->capture_default_str();
  w->add_option("--max-seconds", sweep.max_seconds, "ILP time limit")->capture_default_str();
  w->callback([&] { action = [&] { return do_sweep(sweep, w, out); }; });

  auto* m = app.add_subcommand("metrics", "Area metrics of a faithfulness curve");
  m->require_subcommand(1);
  std::string curve_path;
  for (const char* name : {"cpr", "cmd"}) {
    auto* sub = m->add_subcommand(name, std::string(name) == "cpr"
                                            ? "Normalized area under the curve"
                                            : "Normalized area between the curve and 1");
    sub->add_option("--curve", curve_path, "Curve JSON")->required()->check(CLI::ExistingFile);
    const bool is_cpr = std::string(name) == "cpr";
    sub->callback([&, is_cpr] {
      action = [&, is_cpr] {
        const FaithfulnessCurve curve = io::parse_curve(io::read_file(curve_path));
        out << io::format_number(is_cpr ? cpr(curve) : cmd(curve)) << "\n";
        return static_cast<int>(kOk);
      };
    });
  }
  std::size_t size_total = 0;
  SizeGrid size_grid;
  auto* sizes = m->add_subcommand("sizes", "Budget grid for a given edge count");
  sizes->add_option("--total", size_total, "Edges on source-target paths")->required();
  sizes->add_option("--fractions", size_grid.fractions, "Explicit fractions");
  sizes->add_option("--log-points", size_grid.log_points, "Log-spaced count")->capture_default_str();
  sizes->add_option("--min-fraction", size_grid.min_fraction, "Smallest fraction")
      ->capture_default_str();
  sizes->callback([&] {
    action = [&] {
      const auto ks = sweep_sizes(size_total, size_grid);
      for (std::size_t i = 0; i < ks.size(); ++i) out << (i ? " " : "") << ks[i];
      out << "\n";
      return static_cast<int>(kOk);
    };
  });

  StatsArgs stats;
  auto* st = app.add_subcommand("stats", "Sign-instability statistics of a score matrix");
  st->add_option("--scores", stats.scores, "Score matrix JSON")->required()->check(CLI::ExistingFile);
  st->add_option("--mu-floor", stats.mu_floor, "Ignore edges with |mean| at or below this")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  st->add_option("--out", stats.out, "Report JSON output");
  st->callback([&] { action = [&] { return do_stats(stats, st, out); }; });

  SynthArgs synth;
  auto* y = app.add_subcommand("synth", "Generate a synthetic graph with a planted circuit");
  y->add_option("--layers", synth.spec.layers, "Strata including source and target")
      ->capture_default_str()->check(CLI::Range(2, 100000));
  y->add_option("--width", synth.spec.nodes_per_layer, "Nodes per interior stratum")
      ->capture_default_str()->check(CLI::Range(1, 100000));
  y->add_option("--qualifiers", synth.spec.qualifiers_per_pair, "Parallel edges per node pair")
      ->capture_default_str()->check(CLI::Range(1, 100000));
  y->add_option("--planted", synth.spec.planted_fraction, "Planted edge fraction in (0, 1]")
      ->capture_default_str();
  y->add_option("--noise", synth.spec.noise_sigma, "Noise standard deviation")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  y->add_option("--flip", synth.spec.flip_probability, "Sign-flip probability, non-planted edges")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  y->add_option("--n", synth.spec.examples_n, "Score columns")->capture_default_str()
      ->check(CLI::Range(1, 1000000));
  y->add_option("--seed", synth.spec.seed, "Generator seed")->capture_default_str();
  y->add_flag("--runs", synth.runs, "Label columns as per_bootstrap_run");
  y->add_option("--out-prefix", synth.out_prefix, "Output path prefix")->required();
  y->callback([&] { action = [&] { return do_synth(synth, y, out); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    return action ? action() : kInvalidInput;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace circuitkit::cli
