#pragma once

#include <cstddef>
#include <span>

#include "gladst/gcn.hpp"
#include "gladst/graph.hpp"
#include "gladst/trainer.hpp"

namespace gladst {

struct ScoredGraph {
  std::size_t graph_index = 0;
  double score = 0.0;    // s_hat - s_check
  double s_hat = 0.0;    // error against student A (normal)
  double s_check = 0.0;  // error against student B (abnormal)
  int label = 0;
};

/// ‖h_G − ĥ_G‖² + (1/|G|)·Σ_i ‖h_i − ĥ_i‖².
double representation_error(const Representation& teacher, const Representation& student);

/// Larger scores flag more anomalous graphs.
ScoredGraph anomaly_score(const Graph& graph, const ModelTriple& models,
                          std::size_t graph_index = 0);

/// Scores every graph of the dataset, in parallel over graphs.
std::vector<ScoredGraph> score_dataset(const GraphDataset& dataset, const ModelTriple& models);

/// Probability that a random anomaly outscores a random normal graph, ties
/// counting one half. Computed from mid-ranks in integer arithmetic.
/// Throws UndefinedAucError unless both classes are present.
double auc(std::span<const ScoredGraph> scored, int anomaly_label);
double auc(std::span<const double> scores, std::span<const int> is_anomaly);

}  // namespace gladst
