#pragma once

#include <string>

#include "gladst/gcn.hpp"

namespace gladst {

enum class OptimizerKind { adam, sgd };

std::string to_string(OptimizerKind k);
OptimizerKind parse_optimizer(const std::string& s);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Full-batch first-order optimizer over GcnParams. Adam keeps first and
/// second moment estimates with bias correction; SGD is a plain step.
class Optimizer {
 public:
  Optimizer(const OptimizerConfig& config, const GcnParams& like);

  void step(GcnParams& params, const GcnGrads& grads);
  int steps_taken() const { return t_; }

 private:
  static void adam_update(Matrix& param, const Matrix& grad, Matrix& m, Matrix& v, double lr_t,
                          double beta1, double beta2, double eps);

  OptimizerConfig config_;
  GcnGrads m_;
  GcnGrads v_;
  int t_ = 0;
};

}  // namespace gladst
