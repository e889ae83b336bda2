#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gladst/linalg.hpp"

namespace gladst {

/// Undirected edge stored canonically with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable graph with its normalized propagation operator precomputed.
///
/// Construction validates the edge set (endpoints in range, no self-loops, no
/// duplicates after canonicalization) and the feature matrix (n rows, at least
/// one column, finite entries).
class Graph {
 public:
  static Graph make(std::size_t node_count, std::vector<Edge> edges, Matrix features, int label);

  std::size_t node_count() const { return node_count_; }
  std::size_t feature_dim() const { return static_cast<std::size_t>(features_.cols()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Matrix& features() const { return features_; }
  const Matrix& norm_adj() const { return norm_adj_; }
  int label() const { return label_; }

  /// Same structure and label with a replacement feature matrix.
  Graph with_features(Matrix features) const;
  Graph with_label(int label) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  Graph() = default;

  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  Matrix features_;
  Matrix norm_adj_;
  int label_ = 0;
};

using GraphPtr = std::shared_ptr<const Graph>;

/// Ordered, immutable collection of graphs sharing one feature dimension.
/// Subsets share the underlying graphs.
struct GraphDataset {
  std::string name;
  std::size_t feature_dim = 0;
  int anomaly_label = 1;
  std::vector<GraphPtr> graphs;

  std::size_t size() const { return graphs.size(); }
  bool empty() const { return graphs.empty(); }
  const Graph& operator[](std::size_t i) const { return *graphs[i]; }

  bool is_anomalous(std::size_t i) const { return graphs[i]->label() == anomaly_label; }
  std::size_t count_anomalous() const;

  /// Graphs at the given positions, in the given order.
  GraphDataset subset(const std::vector<std::size_t>& indices) const;

  friend bool operator==(const GraphDataset& a, const GraphDataset& b);
};

/// Degree of every node as a single feature column.
Matrix degree_features(std::size_t node_count, const std::vector<Edge>& edges);
inline Matrix degree_features(const Graph& g) { return degree_features(g.node_count(), g.edges()); }

/// D̃^{-1/2}(A + I)D̃^{-1/2} as a dense n×n matrix. Off-diagonal entries are
/// computed from the product of both degrees, so the result is exactly symmetric.
Matrix normalize_adjacency(std::size_t node_count, const std::vector<Edge>& edges);
inline Matrix normalize_adjacency(const Graph& g) { return normalize_adjacency(g.node_count(), g.edges()); }

/// Normal and abnormal views of a dataset, ordering preserved.
struct LabelSplit {
  GraphDataset normal;
  GraphDataset abnormal;
};

/// Partitions by dataset.anomaly_label. With require_both set, an empty side
/// raises InsufficientDataError.
LabelSplit split_by_label(const GraphDataset& dataset, bool require_both = false);

}  // namespace gladst
