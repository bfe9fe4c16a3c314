#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "circuitkit/graph.hpp"
#include "circuitkit/ilp.hpp"
#include "circuitkit/metrics.hpp"
#include "circuitkit/scoring.hpp"
#include "circuitkit/selection.hpp"

// JSON interchange formats. Every parser throws InvalidInput on malformed
// text or schema violations. Writers produce pretty-printed, key-ordered
// text so identical inputs give byte-identical files. `config` arguments are
// embedded verbatim as a "config" string and omitted when empty.
namespace circuitkit::io {

// {"nodes": [{"id", "layer"}], "edges": [{"tail", "head", "qualifier"}],
//  "source", "target"}
ComputationGraph parse_graph(std::string_view text);
std::string graph_to_json(const ComputationGraph& g);

// {"graph_ref", "column_kind", "columns", "scores": {edge_key: [N numbers]}}
ScoreMatrix parse_score_matrix(std::string_view text);
std::string score_matrix_to_json(const ScoreMatrix& m);

// {"graph_ref", "tau", "z", "threshold",
//  "edges": {edge_key: {"mu", "sigma", "ci_lo", "ci_hi", "retained"}}}
BootstrapSummary parse_summary(std::string_view text);
std::string summary_to_json(const BootstrapSummary& s,
                            std::string_view config = {});

// Accepts either a score matrix (collapsed to per-edge means) or a bootstrap
// summary (retained means, the rest excluded).
EdgeScores parse_edge_scores(std::string_view text);

std::string instability_to_json(const InstabilityReport& r,
                                std::string_view config = {});

// {"points": [[fraction, faithfulness], ...]}
FaithfulnessCurve parse_curve(std::string_view text);

// {"graph_ref", "edges": [edge_key, ...]}
std::string edge_list_to_json(const ComputationGraph& g, const EdgeSet& edges);

// {"graph_ref", "strategy", "rank", "k", "edges": {edge_key: {"score",
//  "in_circuit"}}, "objective", "warnings"} plus "status" and
// "explored_nodes" when `ilp` is given. The objective is null when no
// feasible circuit exists.
std::string circuit_to_json(const ComputationGraph& g,
                            const AlignedScores& scores,
                            const CircuitSelection& sel,
                            const IlpSolution* ilp = nullptr,
                            std::string_view config = {});

// Shortest text that round-trips to the same double.
std::string format_number(double v);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

}  // namespace circuitkit::io
