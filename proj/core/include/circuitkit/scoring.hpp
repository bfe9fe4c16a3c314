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

class ComputationGraph;

enum class ColumnKind { kPerExample, kPerBootstrapRun };

std::string_view to_string(ColumnKind kind);
std::optional<ColumnKind> parse_column_kind(std::string_view s);

// Raw attribution scores, one row of `columns` values per edge key.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  // `values` is row-major, rows ordered like `edge_keys`. Throws InvalidInput
  // on shape mismatch, non-finite values, zero columns, or duplicate keys.
  ScoreMatrix(std::string graph_ref, ColumnKind kind, std::size_t columns,
              std::vector<std::string> edge_keys, std::vector<double> values);

  const std::string& graph_ref() const { return graph_ref_; }
  ColumnKind kind() const { return kind_; }
  std::size_t columns() const { return columns_; }
  std::size_t rows() const { return keys_.size(); }
  const std::vector<std::string>& edge_keys() const { return keys_; }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * columns_, columns_};
  }
  std::optional<std::size_t> find_row(std::string_view key) const;

 private:
  std::string graph_ref_;
  ColumnKind kind_ = ColumnKind::kPerExample;
  std::size_t columns_ = 0;
  std::vector<std::string> keys_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

enum class ScoreProvenance { kSingleRun, kBootstrapMean };

std::string_view to_string(ScoreProvenance p);

// One final score a(e) per edge. Edges removed by filtering keep a row with
// score 0 and excluded = true.
struct EdgeScores {
  std::string graph_ref;
  ScoreProvenance provenance = ScoreProvenance::kSingleRun;
  std::vector<std::string> edge_keys;
  std::vector<double> values;
  std::vector<bool> excluded;
};

// Scores re-indexed to a graph's canonical edge order.
struct AlignedScores {
  std::vector<double> value;
  std::vector<bool> excluded;
};

// Throws InvalidInput unless the scores cover exactly the graph's edges.
AlignedScores align_scores(const ComputationGraph& g, const EdgeScores& s);

struct EdgeInterval {
  double mu = 0.0;
  double sigma = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool retained = false;
};

struct BootstrapSummary {
  std::string graph_ref;
  std::size_t tau = 0;
  double z = 0.0;
  double threshold = 0.0;
  std::vector<std::string> edge_keys;
  std::vector<EdgeInterval> records;

  // Retained edges score mu; the rest are excluded.
  EdgeScores scores() const;
};

struct EdgeInstability {
  double mean = 0.0;
  bool qualifies = false;  // |mean| > mu_floor
  bool unstable = false;   // qualifies and has both signs
};

struct InstabilityReport {
  double mu_floor = 0.0;
  std::size_t qualifying = 0;
  std::size_t unstable = 0;
  double fraction = 0.0;  // unstable / qualifying, 0 when none qualify
  std::vector<std::string> edge_keys;
  std::vector<EdgeInstability> edges;
};

inline constexpr double kDefaultZ = 1.96;
inline constexpr double kDefaultMuFloor = 1e-6;

// Draws `tau` with-replacement resamples of the example columns. Each run
// draws N example indices shared by all edges; an edge's run value is its
// mean over those indices.
ScoreMatrix bootstrap_resample(const ScoreMatrix& m, std::size_t tau,
                               std::uint64_t seed);

// Mean, sample standard deviation (n - 1) and the normal-quantile interval
// mu +- z * sigma / sqrt(tau) per edge. An edge is retained when the interval
// clears the threshold on the side of its mean's sign.
BootstrapSummary confidence_filter(const ScoreMatrix& m, double z,
                                   double threshold);

InstabilityReport sign_instability(const ScoreMatrix& m,
                                   double mu_floor = kDefaultMuFloor);

EdgeScores collapse_to_scores(const ScoreMatrix& m);

}  // namespace circuitkit
