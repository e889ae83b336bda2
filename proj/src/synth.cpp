#include "gladst/synth.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "gladst/error.hpp"
#include "gladst/fingerprint.hpp"
#include "gladst/rng.hpp"

namespace gladst {
namespace {

std::vector<Edge> ring(int n, int offset = 0) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({offset + i, offset + (i + 1) % n});
  return edges;
}

std::vector<Edge> random_tree(int n, Rng& rng) {
  std::vector<Edge> edges;
  for (int i = 1; i < n; ++i) edges.push_back({static_cast<int>(rng.below(i)), i});
  return edges;
}

std::vector<Edge> base_edges(const SynthSpec& spec, int n, Rng& rng) {
  return spec.base_motif == BaseMotif::single_ring ? ring(n) : random_tree(n, rng);
}

int draw_nodes(const SynthSpec& spec, Rng& rng) {
  return static_cast<int>(rng.between(spec.min_nodes, spec.max_nodes));
}

std::vector<Edge> canonical(std::vector<Edge> edges) {
  for (auto& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

Graph node_property_anomaly(const SynthSpec& spec, int n, Rng& rng, int label) {
  auto edges = canonical(base_edges(spec, n, rng));
  const int target = static_cast<int>(rng.below(n));

  std::vector<char> was_neighbor(n, 0);
  std::vector<Edge> kept;
  for (const auto& e : edges) {
    if (e.u == target || e.v == target) {
      was_neighbor[e.u == target ? e.v : e.u] = 1;
    } else {
      kept.push_back(e);
    }
  }
  std::vector<int> fresh, former;
  for (int i = 0; i < n; ++i) {
    if (i == target) continue;
    (was_neighbor[i] ? former : fresh).push_back(i);
  }
  rng.shuffle(fresh);
  rng.shuffle(former);
  fresh.insert(fresh.end(), former.begin(), former.end());
  const int links = (n + 1) / 2;
  for (int i = 0; i < links; ++i) kept.push_back({target, fresh[i]});

  Matrix x = degree_features(n, canonical(kept));
  for (Index c = 0; c < x.cols(); ++c) x(target, c) += spec.perturb_scale * rng.normal();
  return Graph::make(n, std::move(kept), std::move(x), label);
}

Graph double_ring(int n, int label) {
  const int first = n / 2;
  const int second = n - first;
  auto edges = ring(first);
  const auto tail = ring(second, first);
  edges.insert(edges.end(), tail.begin(), tail.end());
  edges.push_back({0, first});  // bridge
  Matrix x = degree_features(n, edges);
  return Graph::make(n, std::move(edges), std::move(x), label);
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.base_count < 1) throw SpecError("base_count must be >= 1");
  if (spec.anomaly_count < 0) throw SpecError("anomaly_count must be >= 0");
  if (spec.min_nodes < 3) throw SpecError("node range minimum must be >= 3");
  if (spec.max_nodes < spec.min_nodes) throw SpecError("node range maximum below minimum");
  if (!(spec.perturb_scale > 0.0)) throw SpecError("perturb_scale must be > 0");
  if (spec.anomaly_label != 0 && spec.anomaly_label != 1) throw SpecError("anomaly_label must be 0 or 1");
  if (spec.anomaly_count > 0 && spec.anomaly_kind == AnomalyKind::graph_property && spec.min_nodes < 6) {
    throw SpecError("graph_property anomalies need two rings of >= 3 nodes; node range minimum must be >= 6");
  }
  if (spec.name.empty()) throw SpecError("dataset name is empty");
}

GraphDataset generate_synthetic(const SynthSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const int normal_label = 1 - spec.anomaly_label;

  GraphDataset ds;
  ds.name = spec.name;
  ds.feature_dim = 1;
  ds.anomaly_label = spec.anomaly_label;
  ds.graphs.reserve(static_cast<std::size_t>(spec.base_count + spec.anomaly_count));
  for (int i = 0; i < spec.base_count; ++i) {
    const int n = draw_nodes(spec, rng);
    auto edges = base_edges(spec, n, rng);
    Matrix x = degree_features(n, edges);
    ds.graphs.push_back(std::make_shared<const Graph>(Graph::make(n, std::move(edges), std::move(x), normal_label)));
  }
  for (int i = 0; i < spec.anomaly_count; ++i) {
    const int n = draw_nodes(spec, rng);
    ds.graphs.push_back(std::make_shared<const Graph>(
        spec.anomaly_kind == AnomalyKind::node_property ? node_property_anomaly(spec, n, rng, spec.anomaly_label)
                                                        : double_ring(n, spec.anomaly_label)));
  }
  return ds;
}

std::string to_string(BaseMotif m) { return m == BaseMotif::single_ring ? "single_ring" : "tree"; }

std::string to_string(AnomalyKind k) {
  return k == AnomalyKind::node_property ? "node_property" : "graph_property";
}

BaseMotif parse_base_motif(const std::string& s) {
  if (s == "single_ring" || s == "single-ring" || s == "ring") return BaseMotif::single_ring;
  if (s == "tree") return BaseMotif::tree;
  throw SpecError("unknown base motif '" + s + "'");
}

AnomalyKind parse_anomaly_kind(const std::string& s) {
  if (s == "node_property" || s == "node-property") return AnomalyKind::node_property;
  if (s == "graph_property" || s == "graph-property") return AnomalyKind::graph_property;
  throw SpecError("unknown anomaly kind '" + s + "'");
}

std::string describe(const SynthSpec& spec) {
  std::ostringstream os;
  os << "name=" << spec.name << '\n'
     << "base_count=" << spec.base_count << '\n'
     << "anomaly_count=" << spec.anomaly_count << '\n'
     << "base_motif=" << to_string(spec.base_motif) << '\n'
     << "anomaly_kind=" << to_string(spec.anomaly_kind) << '\n'
     << "node_range=" << spec.min_nodes << ',' << spec.max_nodes << '\n'
     << "perturb_scale=" << format_double(spec.perturb_scale) << '\n'
     << "seed=" << spec.seed << '\n'
     << "anomaly_label=" << spec.anomaly_label << '\n';
  return os.str();
}

int cycle_rank(const Graph& g) {
  const int n = static_cast<int>(g.node_count());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = n;
  for (const auto& e : g.edges()) {
    const int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return static_cast<int>(g.edges().size()) - n + components;
}

}  // namespace gladst
