#include "gladst/scoring.hpp"

#include <algorithm>
#include <numeric>

#include "gladst/error.hpp"

namespace gladst {

double representation_error(const Representation& teacher, const Representation& student) {
  return (teacher.hg - student.hg).squaredNorm() +
         (teacher.h1 - student.h1).squaredNorm() / static_cast<double>(teacher.h1.rows());
}

ScoredGraph anomaly_score(const Graph& graph, const ModelTriple& models, std::size_t graph_index) {
  if (graph.feature_dim() != models.feature_dim) {
    throw ShapeError("graph feature_dim " + std::to_string(graph.feature_dim()) + " does not match model feature_dim " +
                     std::to_string(models.feature_dim));
  }
  const auto teacher = forward(graph, models.teacher).representation();
  const auto a = forward(graph, models.student_a).representation();
  const auto b = forward(graph, models.student_b).representation();
  ScoredGraph s;
  s.graph_index = graph_index;
  s.s_hat = representation_error(teacher, a);
  s.s_check = representation_error(teacher, b);
  s.score = s.s_hat - s.s_check;
  s.label = graph.label();
  return s;
}

std::vector<ScoredGraph> score_dataset(const GraphDataset& dataset, const ModelTriple& models) {
  if (dataset.feature_dim != models.feature_dim) {
    throw ShapeError("dataset feature_dim " + std::to_string(dataset.feature_dim) +
                     " does not match model feature_dim " + std::to_string(models.feature_dim));
  }
  std::vector<ScoredGraph> out(dataset.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < static_cast<long long>(dataset.size()); ++i) {
    try {
      out[static_cast<std::size_t>(i)] = anomaly_score(dataset[static_cast<std::size_t>(i)], models, static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(gladst_score_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

double auc(std::span<const double> scores, std::span<const int> is_anomaly) {
  if (scores.size() != is_anomaly.size()) throw PairingError("scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the mid-rank sum of the anomalies: a tie block over 1-based ranks
  // [lo, hi] contributes lo + hi per member.
  unsigned long long rank2_sum = 0, positives = 0;
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo;
    while (hi + 1 < n && scores[order[hi + 1]] == scores[order[lo]]) ++hi;
    for (std::size_t k = lo; k <= hi; ++k) {
      if (is_anomaly[order[k]]) {
        rank2_sum += (lo + 1) + (hi + 1);
        ++positives;
      }
    }
    lo = hi + 1;
  }
  const unsigned long long negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw UndefinedAucError("AUC needs both classes; got " + std::to_string(positives) + " anomalous and " +
                            std::to_string(negatives) + " normal graphs");
  }
  const unsigned long long u2 = rank2_sum - positives * (positives + 1);
  return static_cast<double>(u2) / (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

double auc(std::span<const ScoredGraph> scored, int anomaly_label) {
  std::vector<double> scores;
  std::vector<int> positive;
  scores.reserve(scored.size());
  positive.reserve(scored.size());
  for (const auto& s : scored) {
    scores.push_back(s.score);
    positive.push_back(s.label == anomaly_label ? 1 : 0);
  }
  return auc(scores, positive);
}

}  // namespace gladst
