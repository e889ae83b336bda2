#include "gladst/trainer.hpp"

#include <cmath>
#include <sstream>

#include "gladst/error.hpp"
#include "gladst/fingerprint.hpp"
#include "gladst/kernels.hpp"

namespace gladst {
namespace {

Reduction reduction_for(const TrainConfig& c) {
  return c.deterministic ? Reduction::ordered : Reduction::unordered;
}

bool finite(const GcnGrads& g) { return g.g_theta0.allFinite() && g.g_theta1.allFinite(); }

// Overflowing parameters surface as NumericError from the forward pass.
template <typename F>
auto guarded(std::string_view phase, int epoch, F&& f) {
  try {
    return f();
  } catch (const NumericError&) {
    throw DivergenceError(std::string(phase), epoch);
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(optimizer.learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (!(eps_teacher > 0.0)) throw ConfigError("eps_teacher must be > 0");
  if (!(optimizer.beta1 >= 0.0 && optimizer.beta1 < 1.0) || !(optimizer.beta2 >= 0.0 && optimizer.beta2 < 1.0)) {
    throw ConfigError("adam betas must lie in [0, 1)");
  }
  if (!(optimizer.epsilon > 0.0)) throw ConfigError("adam epsilon must be > 0");
  if (ablation.no_node_loss && ablation.no_graph_loss) {
    throw ConfigError("no-node-loss and no-graph-loss together leave no student objective");
  }
  if (shape.hidden < 1 || shape.output < 1) throw ConfigError("layer widths must be >= 1");
}

std::string canonical_string(const TrainConfig& c) {
  std::ostringstream os;
  os << "epochs=" << c.epochs << '\n'
     << "learning_rate=" << format_double(c.optimizer.learning_rate) << '\n'
     << "optimizer=" << to_string(c.optimizer.kind) << '\n'
     << "beta1=" << format_double(c.optimizer.beta1) << '\n'
     << "beta2=" << format_double(c.optimizer.beta2) << '\n'
     << "adam_epsilon=" << format_double(c.optimizer.epsilon) << '\n'
     << "seed=" << c.seed << '\n'
     << "eps_teacher=" << format_double(c.eps_teacher) << '\n'
     << "untrained_teacher=" << c.ablation.untrained_teacher << '\n'
     << "no_node_loss=" << c.ablation.no_node_loss << '\n'
     << "no_graph_loss=" << c.ablation.no_graph_loss << '\n'
     << "deterministic=" << c.deterministic << '\n'
     << "hidden=" << c.shape.hidden << '\n'
     << "output=" << c.shape.output << '\n';
  return os.str();
}

std::uint64_t fingerprint(const TrainConfig& config, std::string_view dataset_name) {
  return fnv1a(canonical_string(config) + "dataset=" + std::string(dataset_name) + '\n');
}

TeacherRun train_teacher(const GraphDataset& dataset, const TrainConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  if (dataset.empty()) throw InsufficientDataError("teacher training needs at least one graph");
  TeacherRun run;
  run.params = init_params(dataset.feature_dim, config.seed, config.shape);
  if (config.ablation.untrained_teacher) return run;

  Optimizer opt(config.optimizer, run.params);
  run.curve.reserve(static_cast<std::size_t>(config.epochs));
  run.spread.reserve(static_cast<std::size_t>(config.epochs));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    auto r = guarded("teacher", epoch, [&] {
      return teacher_objective(dataset.graphs, run.params, config.eps_teacher, reduction_for(config));
    });
    if (!std::isfinite(r.loss.value) || !finite(r.grads)) throw DivergenceError("teacher", epoch);
    run.curve.push_back(r.loss.value);
    run.spread.push_back(r.loss.graph_spread + r.loss.node_spread);
    if (on_epoch) on_epoch("teacher", epoch, r.loss.value);
    opt.step(run.params, r.grads);
  }
  return run;
}

StudentRun train_student(const GraphDataset& view, const GcnParams& teacher, const TrainConfig& config,
                         std::uint64_t seed_offset, const EpochCallback& on_epoch, std::string_view phase) {
  config.validate();
  if (view.empty()) {
    throw InsufficientDataError(std::string(phase) + " has no training graphs in dataset '" + view.name + "'");
  }
  if (teacher.feature_dim() != view.feature_dim) {
    throw ShapeError("teacher expects feature_dim " + std::to_string(teacher.feature_dim()) + ", dataset has " +
                     std::to_string(view.feature_dim));
  }
  const auto targets = represent_batch(view.graphs, teacher);
  const auto terms = config.student_terms();

  StudentRun run;
  run.params = init_params(view.feature_dim, config.seed + seed_offset, teacher.shape());
  Optimizer opt(config.optimizer, run.params);
  run.curve.reserve(static_cast<std::size_t>(config.epochs));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    auto r = guarded(phase, epoch, [&] {
      return student_objective(view.graphs, targets, run.params, terms, reduction_for(config));
    });
    if (!std::isfinite(r.loss.value) || !finite(r.grads)) throw DivergenceError(std::string(phase), epoch);
    run.curve.push_back(r.loss.value);
    if (on_epoch) on_epoch(phase, epoch, r.loss.value);
    opt.step(run.params, r.grads);
  }
  return run;
}

ModelTriple train_all(const GraphDataset& dataset, const TrainConfig& config, const EpochCallback& on_epoch) {
  config.validate();
  const auto split = split_by_label(dataset, /*require_both=*/true);

  ModelTriple models;
  models.feature_dim = dataset.feature_dim;
  models.config_fingerprint = fingerprint(config, dataset.name);

  auto teacher = train_teacher(dataset, config, on_epoch);
  models.teacher = std::move(teacher.params);
  models.curves.teacher = std::move(teacher.curve);

  auto a = train_student(split.normal, models.teacher, config, 1, on_epoch, "student_a");
  models.student_a = std::move(a.params);
  models.curves.student_a = std::move(a.curve);

  auto b = train_student(split.abnormal, models.teacher, config, 2, on_epoch, "student_b");
  models.student_b = std::move(b.params);
  models.curves.student_b = std::move(b.curve);
  return models;
}

}  // namespace gladst
