#include "gladst/gcn.hpp"

#include <cmath>
#include <string>

#include "gladst/error.hpp"
#include "gladst/rng.hpp"

namespace gladst {
namespace {

Matrix uniform_matrix(Index rows, Index cols, double bound, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-bound, bound);
  return m;
}

void check_params(const Graph& graph, const GcnParams& params) {
  if (params.theta0.rows() != static_cast<Index>(graph.feature_dim())) {
    throw ShapeError("graph has feature_dim " + std::to_string(graph.feature_dim()) +
                     " but parameters expect " + std::to_string(params.theta0.rows()));
  }
  if (params.theta1.rows() != params.theta0.cols()) {
    throw ShapeError("layer widths disagree: theta0 has " + std::to_string(params.theta0.cols()) +
                     " columns, theta1 has " + std::to_string(params.theta1.rows()) + " rows");
  }
}

}  // namespace

GcnGrads GcnGrads::zeros_like(const GcnParams& p) {
  return {Matrix::Zero(p.theta0.rows(), p.theta0.cols()), Matrix::Zero(p.theta1.rows(), p.theta1.cols())};
}

GcnGrads& GcnGrads::operator+=(const GcnGrads& other) {
  g_theta0 += other.g_theta0;
  g_theta1 += other.g_theta1;
  return *this;
}

GcnParams init_params(std::size_t feature_dim, std::uint64_t seed, GcnShape shape) {
  if (feature_dim < 1) throw ShapeError("feature_dim must be >= 1");
  Rng rng(seed);
  GcnParams p;
  const auto d = static_cast<Index>(feature_dim);
  const auto hidden = static_cast<Index>(shape.hidden);
  const auto out = static_cast<Index>(shape.output);
  p.theta0 = uniform_matrix(d, hidden, 1.0 / std::sqrt(static_cast<double>(d)), rng);
  p.theta1 = uniform_matrix(hidden, out, 1.0 / std::sqrt(static_cast<double>(hidden)), rng);
  return p;
}

namespace {

void max_pool(ForwardTrace& t) {
  const Index n = t.h1.rows();
  const Index out = t.h1.cols();
  t.hg.resize(out);
  t.argmax.assign(static_cast<std::size_t>(out), 0);
  for (Index k = 0; k < out; ++k) {
    Index best = 0;
    for (Index i = 1; i < n; ++i) {
      if (t.h1(i, k) > t.h1(best, k)) best = i;
    }
    t.argmax[static_cast<std::size_t>(k)] = best;
    t.hg[k] = t.h1(best, k);
  }
}

void first_layer(const Graph& graph, const GcnParams& params, ForwardTrace& t) {
  t.sx.noalias() = graph.norm_adj() * graph.features();
  t.pre0.noalias() = t.sx * params.theta0;
  if (!t.pre0.allFinite()) throw NumericError("non-finite pre-activation in GCN layer 1");
  t.h0 = t.pre0.cwiseMax(0.0);
}

void second_layer(const Graph& graph, const Eigen::Ref<const Matrix>& z1, ForwardTrace& t) {
  t.pre1.noalias() = graph.norm_adj() * z1;
  if (!t.pre1.allFinite()) throw NumericError("non-finite pre-activation in GCN layer 2");
  t.h1 = t.pre1.cwiseMax(0.0);
  max_pool(t);
}

// Gradient at pre1, with the max-pool routing and the ReLU gate applied.
Matrix pre1_gradient(const ForwardTrace& trace, const Matrix& d_h1, const Vector& d_hg) {
  const Index n = trace.h1.rows();
  const Index out = trace.h1.cols();
  if (d_h1.rows() != n || d_h1.cols() != out) {
    throw ShapeError("d_h1 is " + std::to_string(d_h1.rows()) + "x" + std::to_string(d_h1.cols()) +
                     ", expected " + std::to_string(n) + "x" + std::to_string(out));
  }
  if (d_hg.size() != out) throw ShapeError("d_hg has wrong length");
  Matrix dpre1 = d_h1;
  for (Index k = 0; k < out; ++k) dpre1(trace.argmax[static_cast<std::size_t>(k)], k) += d_hg[k];
  return (trace.pre1.array() > 0.0).select(dpre1, 0.0);
}

void check_accumulator(const GcnParams& params, const GcnGrads& into) {
  if (into.g_theta0.rows() != params.theta0.rows() || into.g_theta0.cols() != params.theta0.cols() ||
      into.g_theta1.rows() != params.theta1.rows() || into.g_theta1.cols() != params.theta1.cols()) {
    throw ShapeError("gradient accumulator does not match parameter shapes");
  }
}

}  // namespace

ForwardTrace forward(const Graph& graph, const GcnParams& params) {
  check_params(graph, params);
  ForwardTrace t;
  first_layer(graph, params, t);
  const Matrix z1 = t.h0 * params.theta1;
  second_layer(graph, z1, t);
  return t;
}

void accumulate_backward(const Graph& graph, const GcnParams& params, const ForwardTrace& trace,
                         const Matrix& d_h1, const Vector& d_hg, GcnGrads& into) {
  check_accumulator(params, into);
  const Matrix dpre1 = pre1_gradient(trace, d_h1, d_hg);
  // S is symmetric, so S^T·dpre1 = S·dpre1.
  const Matrix dz1 = graph.norm_adj() * dpre1;
  into.g_theta1.noalias() += trace.h0.transpose() * dz1;
  Matrix dpre0 = dz1 * params.theta1.transpose();
  dpre0 = (trace.pre0.array() > 0.0).select(dpre0, 0.0);
  into.g_theta0.noalias() += trace.sx.transpose() * dpre0;
}

GcnGrads backward(const Graph& graph, const GcnParams& params, const ForwardTrace& trace,
                  const Matrix& d_h1, const Vector& d_hg) {
  GcnGrads g = GcnGrads::zeros_like(params);
  accumulate_backward(graph, params, trace, d_h1, d_hg, g);
  return g;
}


std::vector<ForwardTrace> forward_block(std::span<const GraphPtr> graphs, const GcnParams& params) {
  std::vector<ForwardTrace> traces(graphs.size());
  Index rows = 0;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    check_params(*graphs[g], params);
    first_layer(*graphs[g], params, traces[g]);
    rows += traces[g].h0.rows();
  }
  Matrix h0(rows, params.theta0.cols());
  Index off = 0;
  for (const auto& t : traces) {
    h0.middleRows(off, t.h0.rows()) = t.h0;
    off += t.h0.rows();
  }
  const Matrix z1 = h0 * params.theta1;
  off = 0;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    const Index n = traces[g].h0.rows();
    second_layer(*graphs[g], z1.middleRows(off, n), traces[g]);
    off += n;
  }
  return traces;
}

void accumulate_backward_block(std::span<const GraphPtr> graphs, const GcnParams& params,
                               std::span<const ForwardTrace> traces, std::span<const OutputGrads> grads,
                               GcnGrads& into) {
  if (traces.size() != graphs.size() || grads.size() != graphs.size()) {
    throw ShapeError("block backward needs one trace and one output gradient per graph");
  }
  check_accumulator(params, into);
  Index rows = 0;
  for (const auto& t : traces) rows += t.h1.rows();
  const Index d = params.theta0.rows();
  const Index hidden = params.theta0.cols();
  const Index out = params.theta1.cols();

  Matrix h0(rows, hidden), sx(rows, d), dz1(rows, out);
  Index off = 0;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    const auto& t = traces[g];
    const Index n = t.h1.rows();
    h0.middleRows(off, n) = t.h0;
    sx.middleRows(off, n) = t.sx;
    dz1.middleRows(off, n).noalias() = graphs[g]->norm_adj() * pre1_gradient(t, grads[g].d_h1, grads[g].d_hg);
    off += n;
  }
  into.g_theta1.noalias() += h0.transpose() * dz1;
  Matrix dpre0 = dz1 * params.theta1.transpose();
  off = 0;
  for (const auto& t : traces) {
    const Index n = t.h1.rows();
    auto block = dpre0.middleRows(off, n);
    block = (t.pre0.array() > 0.0).select(block, 0.0);
    off += n;
  }
  into.g_theta0.noalias() += sx.transpose() * dpre0;
}

}  // namespace gladst
