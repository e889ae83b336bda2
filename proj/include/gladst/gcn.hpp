#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gladst/graph.hpp"
#include "gladst/linalg.hpp"

namespace gladst {

/// Layer widths of the two-layer encoder.
struct GcnShape {
  std::size_t hidden = 512;
  std::size_t output = 256;
  friend bool operator==(const GcnShape&, const GcnShape&) = default;
};

/// Weights of a two-layer bias-free GCN: feature_dim×hidden and hidden×output.
struct GcnParams {
  Matrix theta0;
  Matrix theta1;

  std::size_t feature_dim() const { return static_cast<std::size_t>(theta0.rows()); }
  GcnShape shape() const {
    return {static_cast<std::size_t>(theta0.cols()), static_cast<std::size_t>(theta1.cols())};
  }
  friend bool operator==(const GcnParams& a, const GcnParams& b) {
    return a.theta0 == b.theta0 && a.theta1 == b.theta1;
  }
};

/// Gradients with the same shapes as GcnParams.
struct GcnGrads {
  Matrix g_theta0;
  Matrix g_theta1;

  static GcnGrads zeros_like(const GcnParams& p);
  GcnGrads& operator+=(const GcnGrads& other);
};

/// Node-level and graph-level outputs of one forward pass.
struct Representation {
  Matrix h1;  // n × output
  Vector hg;  // output
};

/// Everything backward() needs from a forward pass.
struct ForwardTrace {
  Matrix sx;    // S·X
  Matrix pre0;  // S·X·Θ⁰
  Matrix h0;    // ReLU(pre0)
  Matrix pre1;  // S·h0·Θ¹
  Matrix h1;    // ReLU(pre1), node representations
  Vector hg;    // column-wise max of h1, graph representation
  std::vector<Index> argmax;  // row that won each column of the max-pool

  Representation representation() const { return {h1, hg}; }
};

/// Uniform on ±1/sqrt(fan_in) per layer, deterministic in seed.
GcnParams init_params(std::size_t feature_dim, std::uint64_t seed, GcnShape shape = {});

/// Max-pool ties go to the lowest node index.
ForwardTrace forward(const Graph& graph, const GcnParams& params);

/// Reverse-mode pass for a scalar loss whose output gradients are d_h1
/// (n × output) and d_hg (output). ReLU passes gradient only where the
/// pre-activation is strictly positive; d_hg[k] flows to row argmax[k].
GcnGrads backward(const Graph& graph, const GcnParams& params, const ForwardTrace& trace,
                  const Matrix& d_h1, const Vector& d_hg);

/// backward() that adds into an existing accumulator.
void accumulate_backward(const Graph& graph, const GcnParams& params, const ForwardTrace& trace,
                         const Matrix& d_h1, const Vector& d_hg, GcnGrads& into);

/// Forward passes for a block of graphs with the dense layer products done
/// on the row-stacked node matrices of the whole block.
std::vector<ForwardTrace> forward_block(std::span<const GraphPtr> graphs, const GcnParams& params);

/// Output gradients for every graph of a block, positionally matched.
struct OutputGrads {
  Matrix d_h1;
  Vector d_hg;
};

/// Block counterpart of accumulate_backward().
void accumulate_backward_block(std::span<const GraphPtr> graphs, const GcnParams& params,
                               std::span<const ForwardTrace> traces, std::span<const OutputGrads> grads,
                               GcnGrads& into);

}  // namespace gladst
