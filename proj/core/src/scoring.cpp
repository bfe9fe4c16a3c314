#include "circuitkit/scoring.hpp"

#include <cmath>

#include "circuitkit/error.hpp"
#include "circuitkit/graph.hpp"
#include "circuitkit/random.hpp"
#include "wide.hpp"

namespace circuitkit {
using detail::Wide;
using detail::wide_sqrt;

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::kPerExample ? "per_example" : "per_bootstrap_run";
}

std::optional<ColumnKind> parse_column_kind(std::string_view s) {
  if (s == "per_example") return ColumnKind::kPerExample;
  if (s == "per_bootstrap_run") return ColumnKind::kPerBootstrapRun;
  return std::nullopt;
}

std::string_view to_string(ScoreProvenance p) {
  return p == ScoreProvenance::kSingleRun ? "single_run" : "bootstrap_mean";
}

ScoreMatrix::ScoreMatrix(std::string graph_ref, ColumnKind kind,
                         std::size_t columns,
                         std::vector<std::string> edge_keys,
                         std::vector<double> values)
    : graph_ref_(std::move(graph_ref)),
      kind_(kind),
      columns_(columns),
      keys_(std::move(edge_keys)),
      values_(std::move(values)) {
  if (columns_ == 0) throw InvalidInput("score matrix needs at least 1 column");
  if (values_.size() != keys_.size() * columns_) {
    throw InvalidInput("score matrix shape mismatch");
  }
  for (std::size_t r = 0; r < keys_.size(); ++r) {
    if (!lookup_.emplace(keys_[r], r).second) {
      throw InvalidInput("duplicate score row '" + keys_[r] + "'");
    }
    for (double v : row(r)) {
      if (!std::isfinite(v)) {
        throw InvalidInput("non-finite score for '" + keys_[r] + "'");
      }
    }
  }
}

std::optional<std::size_t> ScoreMatrix::find_row(std::string_view key) const {
  auto it = lookup_.find(std::string(key));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

AlignedScores align_scores(const ComputationGraph& g, const EdgeScores& s) {
  if (s.values.size() != s.edge_keys.size() ||
      s.excluded.size() != s.edge_keys.size()) {
    throw InvalidInput("edge scores are ragged");
  }
  if (s.edge_keys.size() != g.edge_count()) {
    throw InvalidInput("scores cover " + std::to_string(s.edge_keys.size()) +
                       " edges, graph has " + std::to_string(g.edge_count()));
  }
  AlignedScores out;
  out.value.assign(g.edge_count(), 0.0);
  out.excluded.assign(g.edge_count(), false);
  std::vector<bool> seen(g.edge_count(), false);
  for (std::size_t i = 0; i < s.edge_keys.size(); ++i) {
    auto e = g.find_edge(s.edge_keys[i]);
    if (!e) throw InvalidInput("score for unknown edge '" + s.edge_keys[i] + "'");
    if (seen[*e]) throw InvalidInput("duplicate score '" + s.edge_keys[i] + "'");
    if (!std::isfinite(s.values[i])) {
      throw InvalidInput("non-finite score for '" + s.edge_keys[i] + "'");
    }
    seen[*e] = true;
    out.value[*e] = s.values[i];
    out.excluded[*e] = s.excluded[i];
  }
  return out;
}

EdgeScores BootstrapSummary::scores() const {
  EdgeScores s;
  s.graph_ref = graph_ref;
  s.provenance = ScoreProvenance::kBootstrapMean;
  s.edge_keys = edge_keys;
  s.values.reserve(records.size());
  s.excluded.reserve(records.size());
  for (const auto& r : records) {
    s.values.push_back(r.retained ? r.mu : 0.0);
    s.excluded.push_back(!r.retained);
  }
  return s;
}

ScoreMatrix bootstrap_resample(const ScoreMatrix& m, std::size_t tau,
                               std::uint64_t seed) {
  if (m.kind() != ColumnKind::kPerExample) {
    throw InvalidInput("bootstrap_resample expects a per_example matrix");
  }
  if (tau < 2) throw InvalidInput("bootstrap needs tau >= 2");

  const std::size_t n = m.columns();
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> draws(tau, std::vector<std::size_t>(n));
  for (auto& run : draws) {
    for (auto& idx : run) idx = rng.below(n);
  }

  std::vector<double> values(m.rows() * tau);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto src = m.row(r);
    for (std::size_t j = 0; j < tau; ++j) {
      long double sum = 0.0L;
      for (std::size_t idx : draws[j]) sum += src[idx];
      values[r * tau + j] = static_cast<double>(sum / n);
    }
  }
  return ScoreMatrix(m.graph_ref(), ColumnKind::kPerBootstrapRun, tau,
                     m.edge_keys(), std::move(values));
}

BootstrapSummary confidence_filter(const ScoreMatrix& m, double z,
                                   double threshold) {
  if (m.kind() != ColumnKind::kPerBootstrapRun) {
    throw InvalidInput("confidence_filter expects a per_bootstrap_run matrix");
  }
  if (m.columns() < 2) throw InvalidInput("confidence_filter needs tau >= 2");
  if (!(z > 0.0) || !std::isfinite(z)) throw InvalidInput("z must be > 0");
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
    throw InvalidInput("threshold must be >= 0");
  }

  const std::size_t tau = m.columns();
  BootstrapSummary out;
  out.graph_ref = m.graph_ref();
  out.tau = tau;
  out.z = z;
  out.threshold = threshold;
  out.edge_keys = m.edge_keys();
  out.records.reserve(m.rows());

  // Wide arithmetic, rounded once per reported quantity.
  const Wide root_tau = wide_sqrt(static_cast<Wide>(tau));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto runs = m.row(r);
    Wide sum = 0;
    for (double v : runs) sum += v;
    const Wide mean = sum / static_cast<Wide>(tau);
    Wide ss = 0;
    for (double v : runs) ss += (v - mean) * (v - mean);
    const Wide sd = wide_sqrt(ss / static_cast<Wide>(tau - 1));
    const Wide half = static_cast<Wide>(z) * sd / root_tau;

    EdgeInterval rec;
    rec.mu = static_cast<double>(mean);
    rec.sigma = static_cast<double>(sd);
    rec.ci_lo = static_cast<double>(mean - half);
    rec.ci_hi = static_cast<double>(mean + half);
    rec.retained = (rec.mu > 0.0 && rec.ci_lo > threshold) ||
                   (rec.mu < 0.0 && rec.ci_hi < -threshold);
    out.records.push_back(rec);
  }
  return out;
}

InstabilityReport sign_instability(const ScoreMatrix& m, double mu_floor) {
  InstabilityReport out;
  out.mu_floor = mu_floor;
  out.edge_keys = m.edge_keys();
  out.edges.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto vals = m.row(r);
    long double sum = 0.0L;
    bool pos = false;
    bool neg = false;
    for (double v : vals) {
      sum += v;
      pos = pos || v > 0.0;
      neg = neg || v < 0.0;
    }
    EdgeInstability rec;
    rec.mean = static_cast<double>(sum / vals.size());
    rec.qualifies = std::fabs(rec.mean) > mu_floor;
    rec.unstable = rec.qualifies && pos && neg;
    out.qualifying += rec.qualifies;
    out.unstable += rec.unstable;
    out.edges.push_back(rec);
  }
  out.fraction = out.qualifying == 0
                     ? 0.0
                     : static_cast<double>(out.unstable) / out.qualifying;
  return out;
}

EdgeScores collapse_to_scores(const ScoreMatrix& m) {
  EdgeScores s;
  s.graph_ref = m.graph_ref();
  s.provenance = m.columns() == 1 ? ScoreProvenance::kSingleRun
                                  : ScoreProvenance::kBootstrapMean;
  s.edge_keys = m.edge_keys();
  s.values.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    long double sum = 0.0L;
    for (double v : m.row(r)) sum += v;
    s.values.push_back(static_cast<double>(sum / m.columns()));
  }
  s.excluded.assign(m.rows(), false);
  return s;
}

}  // namespace circuitkit
