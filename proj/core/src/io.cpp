#include "circuitkit/io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "circuitkit/error.hpp"
#include "json.hpp"

namespace circuitkit::io {
namespace {

using Json = nlohmann::ordered_json;

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::exception& ex) {
    throw InvalidInput(std::string("malformed JSON: ") + ex.what());
  }
}

const Json& field(const Json& obj, const char* name) {
  if (!obj.is_object()) throw InvalidInput("expected a JSON object");
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw InvalidInput(std::string("missing field '") + name + "'");
  }
  return *it;
}

std::string string_field(const Json& obj, const char* name) {
  const Json& v = field(obj, name);
  if (!v.is_string()) {
    throw InvalidInput(std::string("field '") + name + "' must be a string");
  }
  return v.get<std::string>();
}

double number(const Json& v, const char* what) {
  if (!v.is_number()) {
    throw InvalidInput(std::string(what) + " must be a number");
  }
  return v.get<double>();
}

long long integer_field(const Json& obj, const char* name) {
  const Json& v = field(obj, name);
  if (!v.is_number_integer()) {
    throw InvalidInput(std::string("field '") + name + "' must be an integer");
  }
  return v.get<long long>();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void put_config(Json& j, std::string_view config) {
  if (!config.empty()) j["config"] = std::string(config);
}

}  // namespace

ComputationGraph parse_graph(std::string_view text) {
  const Json j = parse_json(text);
  const Json& nodes_json = field(j, "nodes");
  const Json& edges_json = field(j, "edges");
  if (!nodes_json.is_array() || !edges_json.is_array()) {
    throw InvalidInput("'nodes' and 'edges' must be arrays");
  }
  std::vector<Node> nodes;
  for (const auto& n : nodes_json) {
    const long long layer = integer_field(n, "layer");
    if (layer < 0 || layer > std::numeric_limits<int>::max()) {
      throw InvalidInput("node layer out of range");
    }
    nodes.push_back({string_field(n, "id"), static_cast<int>(layer)});
  }
  std::vector<Edge> edges;
  for (const auto& e : edges_json) {
    edges.push_back({string_field(e, "tail"), string_field(e, "head"),
                     string_field(e, "qualifier")});
  }
  return ComputationGraph(std::move(nodes), std::move(edges),
                          string_field(j, "source"), string_field(j, "target"));
}

std::string graph_to_json(const ComputationGraph& g) {
  Json j;
  j["nodes"] = Json::array();
  for (const auto& n : g.nodes()) {
    j["nodes"].push_back({{"id", n.id}, {"layer", n.layer}});
  }
  j["edges"] = Json::array();
  for (const auto& e : g.edges()) {
    j["edges"].push_back(
        {{"tail", e.tail}, {"head", e.head}, {"qualifier", e.qualifier}});
  }
  j["source"] = g.source_id();
  j["target"] = g.target_id();
  return dump(j);
}

ScoreMatrix parse_score_matrix(std::string_view text) {
  const Json j = parse_json(text);
  const std::string kind_text = string_field(j, "column_kind");
  auto kind = parse_column_kind(kind_text);
  if (!kind) throw InvalidInput("unknown column_kind '" + kind_text + "'");
  const long long columns = integer_field(j, "columns");
  if (columns < 1) throw InvalidInput("'columns' must be >= 1");
  const Json& scores = field(j, "scores");
  if (!scores.is_object()) throw InvalidInput("'scores' must be an object");

  std::vector<std::string> keys;
  std::vector<double> values;
  for (auto it = scores.begin(); it != scores.end(); ++it) {
    if (!it.value().is_array() ||
        it.value().size() != static_cast<std::size_t>(columns)) {
      throw InvalidInput("score row '" + it.key() + "' must hold " +
                         std::to_string(columns) + " numbers");
    }
    keys.push_back(it.key());
    for (const auto& v : it.value()) values.push_back(number(v, "score"));
  }
  return ScoreMatrix(string_field(j, "graph_ref"), *kind,
                     static_cast<std::size_t>(columns), std::move(keys),
                     std::move(values));
}

std::string score_matrix_to_json(const ScoreMatrix& m) {
  Json j;
  j["graph_ref"] = m.graph_ref();
  j["column_kind"] = std::string(to_string(m.kind()));
  j["columns"] = m.columns();
  Json scores = Json::object();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    scores[m.edge_keys()[r]] = Json(std::vector<double>(row.begin(), row.end()));
  }
  j["scores"] = std::move(scores);
  return dump(j);
}

BootstrapSummary parse_summary(std::string_view text) {
  const Json j = parse_json(text);
  BootstrapSummary s;
  s.graph_ref = string_field(j, "graph_ref");
  const long long tau = integer_field(j, "tau");
  if (tau < 2) throw InvalidInput("'tau' must be >= 2");
  s.tau = static_cast<std::size_t>(tau);
  s.z = number(field(j, "z"), "z");
  s.threshold = number(field(j, "threshold"), "threshold");
  const Json& edges = field(j, "edges");
  if (!edges.is_object()) throw InvalidInput("'edges' must be an object");
  for (auto it = edges.begin(); it != edges.end(); ++it) {
    const Json& r = it.value();
    EdgeInterval rec;
    rec.mu = number(field(r, "mu"), "mu");
    rec.sigma = number(field(r, "sigma"), "sigma");
    rec.ci_lo = number(field(r, "ci_lo"), "ci_lo");
    rec.ci_hi = number(field(r, "ci_hi"), "ci_hi");
    const Json& retained = field(r, "retained");
    if (!retained.is_boolean()) throw InvalidInput("'retained' must be a bool");
    rec.retained = retained.get<bool>();
    s.edge_keys.push_back(it.key());
    s.records.push_back(rec);
  }
  return s;
}

std::string summary_to_json(const BootstrapSummary& s,
                            std::string_view config) {
  Json j;
  j["graph_ref"] = s.graph_ref;
  j["tau"] = s.tau;
  j["z"] = s.z;
  j["threshold"] = s.threshold;
  std::size_t retained = 0;
  Json edges = Json::object();
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    const auto& r = s.records[i];
    retained += r.retained;
    edges[s.edge_keys[i]] = {{"mu", r.mu},
                             {"sigma", r.sigma},
                             {"ci_lo", r.ci_lo},
                             {"ci_hi", r.ci_hi},
                             {"retained", r.retained}};
  }
  j["retained_count"] = retained;
  j["edges"] = std::move(edges);
  put_config(j, config);
  return dump(j);
}

EdgeScores parse_edge_scores(std::string_view text) {
  const Json j = parse_json(text);
  if (j.is_object() && j.contains("column_kind")) {
    return collapse_to_scores(parse_score_matrix(text));
  }
  if (j.is_object() && j.contains("tau")) {
    return parse_summary(text).scores();
  }
  throw InvalidInput("scores file is neither a score matrix nor a summary");
}

std::string instability_to_json(const InstabilityReport& r,
                                std::string_view config) {
  Json j;
  j["mu_floor"] = r.mu_floor;
  j["qualifying"] = r.qualifying;
  j["unstable"] = r.unstable;
  j["fraction"] = r.fraction;
  Json edges = Json::object();
  for (std::size_t i = 0; i < r.edges.size(); ++i) {
    const auto& e = r.edges[i];
    edges[r.edge_keys[i]] = {{"mean", e.mean},
                             {"qualifies", e.qualifies},
                             {"unstable", e.unstable}};
  }
  j["edges"] = std::move(edges);
  put_config(j, config);
  return dump(j);
}

FaithfulnessCurve parse_curve(std::string_view text) {
  const Json j = parse_json(text);
  const Json& pts = field(j, "points");
  if (!pts.is_array()) throw InvalidInput("'points' must be an array");
  std::vector<CurvePoint> points;
  for (const auto& p : pts) {
    if (!p.is_array() || p.size() != 2) {
      throw InvalidInput("each curve point must be [fraction, faithfulness]");
    }
    points.push_back({number(p[0], "fraction"), number(p[1], "faithfulness")});
  }
  return FaithfulnessCurve(std::move(points));
}

std::string edge_list_to_json(const ComputationGraph& g, const EdgeSet& edges) {
  Json j;
  j["graph_ref"] = g.ref();
  j["edges"] = g.keys_of(edges);
  return dump(j);
}

std::string circuit_to_json(const ComputationGraph& g,
                            const AlignedScores& scores,
                            const CircuitSelection& sel,
                            const IlpSolution* ilp, std::string_view config) {
  Json j;
  j["graph_ref"] = sel.graph_ref;
  j["strategy"] = std::string(to_string(sel.strategy));
  j["rank"] = std::string(to_string(sel.rank_mode));
  j["k"] = sel.budget_k;
  Json edges = Json::object();
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    Json rec = {{"score", scores.value[e]}, {"in_circuit", sel.selected.contains(e)}};
    if (scores.excluded[e]) rec["excluded"] = true;
    edges[g.edge_key(e)] = std::move(rec);
  }
  j["edges"] = std::move(edges);
  j["selected_count"] = sel.selected.size();
  const bool feasible = !ilp || ilp->has_incumbent;
  j["objective"] = feasible ? Json(sel.objective_value) : Json(nullptr);
  if (ilp) {
    j["status"] = std::string(to_string(ilp->status));
    j["explored_nodes"] = ilp->explored_nodes;
  }
  j["warnings"] = sel.warnings;
  put_config(j, config);
  return dump(j);
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidInput("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace circuitkit::io
