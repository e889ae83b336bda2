#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "gladst/gcn.hpp"
#include "gladst/graph.hpp"
#include "gladst/losses.hpp"
#include "gladst/optimizer.hpp"

namespace gladst {

struct Ablation {
  bool untrained_teacher = false;
  bool no_node_loss = false;
  bool no_graph_loss = false;
};

struct TrainConfig {
  int epochs = 150;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  double eps_teacher = 1e-8;
  Ablation ablation;
  bool deterministic = false;
  GcnShape shape;

  void validate() const;
  LossTerms student_terms() const { return {!ablation.no_node_loss, !ablation.no_graph_loss}; }
};

/// Canonical key=value text of every field; the basis of fingerprints.
std::string canonical_string(const TrainConfig& config);
std::uint64_t fingerprint(const TrainConfig& config, std::string_view dataset_name);

struct LossCurves {
  std::vector<double> teacher;
  std::vector<double> student_a;
  std::vector<double> student_b;
  friend bool operator==(const LossCurves&, const LossCurves&) = default;
};

/// Teacher φ, normal-graph student φ̂ and abnormal-graph student φ̌.
struct ModelTriple {
  GcnParams teacher;
  GcnParams student_a;
  GcnParams student_b;
  std::size_t feature_dim = 0;
  std::uint64_t config_fingerprint = 0;
  LossCurves curves;
  friend bool operator==(const ModelTriple&, const ModelTriple&) = default;
};

struct TeacherRun {
  GcnParams params;
  std::vector<double> curve;   // loss before each update
  std::vector<double> spread;  // graph_spread + node_spread before each update
};

struct StudentRun {
  GcnParams params;
  std::vector<double> curve;
};

/// Observer for per-epoch losses. phase is "teacher", "student_a" or "student_b".
using EpochCallback = std::function<void(std::string_view phase, int epoch, double loss)>;

/// Full-batch descent on the reciprocal spread objective over every graph in
/// the dataset. With ablation.untrained_teacher the initial weights are
/// returned and both curves are empty.
TeacherRun train_teacher(const GraphDataset& dataset, const TrainConfig& config,
                         const EpochCallback& on_epoch = {});

/// Fits a student to the frozen teacher's outputs on the given graphs.
/// seed_offset separates the two students' initializations (1 for A, 2 for B).
StudentRun train_student(const GraphDataset& view, const GcnParams& teacher,
                         const TrainConfig& config, std::uint64_t seed_offset,
                         const EpochCallback& on_epoch = {}, std::string_view phase = "student");

/// Teacher on all graphs, then student A on normals, then student B on abnormals.
ModelTriple train_all(const GraphDataset& dataset, const TrainConfig& config,
                      const EpochCallback& on_epoch = {});

}  // namespace gladst
