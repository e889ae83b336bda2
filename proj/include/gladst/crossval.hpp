#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "gladst/graph.hpp"
#include "gladst/scoring.hpp"
#include "gladst/trainer.hpp"

namespace gladst {

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Each class is shuffled by seed and dealt round-robin into k parts; fold f
/// tests on part f. Throws StratificationError when a class has fewer than k graphs.
std::vector<Fold> stratified_kfold(const GraphDataset& dataset, int k, std::uint64_t seed);

/// Fractions of the anomalies kept in the test split (alpha) and training
/// split (beta). Normal graphs are never dropped.
struct Contamination {
  double alpha = 1.0;
  double beta = 1.0;
};

struct EvalOptions {
  int folds = 5;
  Contamination contamination;
  /// Seed for fold assignment and anomaly subsampling; training uses config.seed.
  std::uint64_t split_seed = 0;
  EpochCallback on_epoch;
  std::function<void(int fold, const ModelTriple&)> on_fold_models;
};

struct EvalReport {
  std::string dataset;
  int anomaly_label = 1;
  std::vector<double> fold_aucs;
  double mean_auc = 0.0;
  double std_auc = 0.0;  // population standard deviation across folds
  std::vector<std::vector<ScoredGraph>> per_graph;  // per fold, graph_index into the dataset
  std::uint64_t config_fingerprint = 0;
  std::string config_text;
};

inline constexpr int kReportSchemaVersion = 1;

/// Drops anomalies from a split so that round(fraction · count) remain.
std::vector<std::size_t> subsample_anomalies(const GraphDataset& dataset,
                                             const std::vector<std::size_t>& indices,
                                             double fraction, std::uint64_t seed);

EvalReport cross_validate(const GraphDataset& dataset, const TrainConfig& config,
                          const EvalOptions& options = {});

/// Pretty-printed JSON with a trailing newline.
std::string report_to_json(const EvalReport& report);
void write_report(const std::filesystem::path& path, const EvalReport& report);

/// "<dataset> <mean>±<std>" in percent with two decimals.
std::string format_table_row(const EvalReport& report);

}  // namespace gladst
