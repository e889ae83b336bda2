#include "gladst/optimizer.hpp"

#include <cmath>

#include "gladst/error.hpp"

namespace gladst {

std::string to_string(OptimizerKind k) { return k == OptimizerKind::adam ? "adam" : "sgd"; }

OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "adam") return OptimizerKind::adam;
  if (s == "sgd") return OptimizerKind::sgd;
  throw ConfigError("unknown optimizer '" + s + "' (expected adam or sgd)");
}

Optimizer::Optimizer(const OptimizerConfig& config, const GcnParams& like)
    : config_(config), m_(GcnGrads::zeros_like(like)), v_(GcnGrads::zeros_like(like)) {}

void Optimizer::adam_update(Matrix& param, const Matrix& grad, Matrix& m, Matrix& v, double lr_t,
                            double beta1, double beta2, double eps) {
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
  param.array() -= lr_t * m.array() / (v.array().sqrt() + eps);
}

void Optimizer::step(GcnParams& params, const GcnGrads& grads) {
  ++t_;
  if (config_.kind == OptimizerKind::sgd) {
    params.theta0 -= config_.learning_rate * grads.g_theta0;
    params.theta1 -= config_.learning_rate * grads.g_theta1;
    return;
  }
  // Bias corrections folded into the step size; eps is scaled to match
  // θ -= lr·m̂/(sqrt(v̂)+eps) exactly.
  const double c1 = 1.0 - std::pow(config_.beta1, t_);
  const double c2 = 1.0 - std::pow(config_.beta2, t_);
  const double lr_t = config_.learning_rate * std::sqrt(c2) / c1;
  const double eps_t = config_.epsilon * std::sqrt(c2);
  adam_update(params.theta0, grads.g_theta0, m_.g_theta0, v_.g_theta0, lr_t, config_.beta1, config_.beta2, eps_t);
  adam_update(params.theta1, grads.g_theta1, m_.g_theta1, v_.g_theta1, lr_t, config_.beta1, config_.beta2, eps_t);
}

}  // namespace gladst
