#include "gladst/graph.hpp"

#include <algorithm>
#include <cmath>

#include "gladst/error.hpp"

namespace gladst {

Graph Graph::make(std::size_t node_count, std::vector<Edge> edges, Matrix features, int label) {
  if (node_count == 0) throw IntegrityError("graph has zero nodes");
  for (auto& e : edges) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= node_count ||
        static_cast<std::size_t>(e.v) >= node_count) {
      throw IntegrityError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                           ") outside node range 0.." + std::to_string(node_count - 1));
    }
    if (e.u == e.v) throw IntegrityError("self-loop on node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw IntegrityError("duplicate edge in edge set");
  }
  if (static_cast<std::size_t>(features.rows()) != node_count) {
    throw ShapeError("feature matrix has " + std::to_string(features.rows()) + " rows for " +
                     std::to_string(node_count) + " nodes");
  }
  if (features.cols() < 1) throw ShapeError("feature matrix has no columns");
  if (!features.allFinite()) throw IntegrityError("non-finite node feature");

  Graph g;
  g.node_count_ = node_count;
  g.norm_adj_ = normalize_adjacency(node_count, edges);
  g.edges_ = std::move(edges);
  g.features_ = std::move(features);
  g.label_ = label;
  return g;
}

Graph Graph::with_features(Matrix features) const {
  return make(node_count_, edges_, std::move(features), label_);
}

Graph Graph::with_label(int label) const {
  Graph g = *this;
  g.label_ = label;
  return g;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.node_count_ == b.node_count_ && a.label_ == b.label_ && a.edges_ == b.edges_ &&
         a.features_.rows() == b.features_.rows() && a.features_.cols() == b.features_.cols() &&
         a.features_ == b.features_;
}

std::size_t GraphDataset::count_anomalous() const {
  return static_cast<std::size_t>(std::count_if(
      graphs.begin(), graphs.end(), [&](const GraphPtr& g) { return g->label() == anomaly_label; }));
}

GraphDataset GraphDataset::subset(const std::vector<std::size_t>& indices) const {
  GraphDataset out;
  out.name = name;
  out.feature_dim = feature_dim;
  out.anomaly_label = anomaly_label;
  out.graphs.reserve(indices.size());
  for (auto i : indices) out.graphs.push_back(graphs.at(i));
  return out;
}

bool operator==(const GraphDataset& a, const GraphDataset& b) {
  if (a.name != b.name || a.feature_dim != b.feature_dim || a.anomaly_label != b.anomaly_label ||
      a.graphs.size() != b.graphs.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.graphs.size(); ++i) {
    if (!(*a.graphs[i] == *b.graphs[i])) return false;
  }
  return true;
}

Matrix degree_features(std::size_t node_count, const std::vector<Edge>& edges) {
  Matrix deg = Matrix::Zero(static_cast<Index>(node_count), 1);
  for (const auto& e : edges) {
    deg(e.u, 0) += 1.0;
    deg(e.v, 0) += 1.0;
  }
  return deg;
}

Matrix normalize_adjacency(std::size_t node_count, const std::vector<Edge>& edges) {
  const auto n = static_cast<Index>(node_count);
  std::vector<double> deg(node_count, 1.0);  // self-loop
  for (const auto& e : edges) {
    deg[e.u] += 1.0;
    deg[e.v] += 1.0;
  }
  Matrix s = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) s(i, i) = 1.0 / deg[i];
  for (const auto& e : edges) {
    const double w = 1.0 / std::sqrt(deg[e.u] * deg[e.v]);
    s(e.u, e.v) = w;
    s(e.v, e.u) = w;
  }
  return s;
}

LabelSplit split_by_label(const GraphDataset& dataset, bool require_both) {
  std::vector<std::size_t> normal, abnormal;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (dataset.is_anomalous(i) ? abnormal : normal).push_back(i);
  }
  if (require_both && (normal.empty() || abnormal.empty())) {
    throw InsufficientDataError("dataset '" + dataset.name + "' has " +
                                std::to_string(normal.size()) + " normal and " +
                                std::to_string(abnormal.size()) +
                                " abnormal graphs; both are needed for training");
  }
  return {dataset.subset(normal), dataset.subset(abnormal)};
}

}  // namespace gladst
