#include "gladst/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <mutex>

#include "gladst/error.hpp"

namespace gladst {
namespace {

// Fixed chunking keeps the ordered reduction independent of the thread count.
constexpr std::size_t kChunk = 16;

// Exceptions cannot cross an OpenMP region; capture the first and rethrow.
class FirstError {
 public:
  template <typename F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
      std::lock_guard lock(mu_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
};

long long as_ll(std::size_t n) { return static_cast<long long>(n); }

std::size_t chunk_count(std::size_t m) { return (m + kChunk - 1) / kChunk; }

template <typename T>
std::span<const T> chunk_of(std::span<const T> all, std::size_t c) {
  const std::size_t begin = c * kChunk;
  return all.subspan(begin, std::min(kChunk, all.size() - begin));
}

// Per-chunk gradient of one block; output_grad(g, out) fills graph g's output gradients.
template <typename OutputGrad>
void chunk_gradient(std::span<const GraphPtr> graphs, const GcnParams& params,
                    std::span<const ForwardTrace> traces, std::size_t c, const OutputGrad& output_grad,
                    std::vector<OutputGrads>& scratch, GcnGrads& into) {
  const auto block = chunk_of(graphs, c);
  scratch.resize(block.size());
  for (std::size_t j = 0; j < block.size(); ++j) output_grad(c * kChunk + j, scratch[j]);
  accumulate_backward_block(block, params, chunk_of(traces, c), scratch, into);
}

template <typename OutputGrad>
GcnGrads reduce_gradients(std::span<const GraphPtr> graphs, const GcnParams& params,
                          std::span<const ForwardTrace> traces, Reduction reduction,
                          const OutputGrad& output_grad) {
  const std::size_t chunks = chunk_count(graphs.size());
  FirstError err;
  if (reduction == Reduction::ordered) {
    std::vector<GcnGrads> partial(chunks);
#pragma omp parallel
    {
      std::vector<OutputGrads> scratch;
#pragma omp for schedule(dynamic, 1)
      for (long long c = 0; c < as_ll(chunks); ++c) {
        err.run([&] {
          GcnGrads acc = GcnGrads::zeros_like(params);
          chunk_gradient(graphs, params, traces, static_cast<std::size_t>(c), output_grad, scratch, acc);
          partial[static_cast<std::size_t>(c)] = std::move(acc);
        });
      }
    }
    err.rethrow();
    GcnGrads total = GcnGrads::zeros_like(params);
    for (const auto& p : partial) total += p;
    return total;
  }

  GcnGrads total = GcnGrads::zeros_like(params);
  std::mutex mu;
#pragma omp parallel
  {
    GcnGrads acc = GcnGrads::zeros_like(params);
    std::vector<OutputGrads> scratch;
#pragma omp for schedule(dynamic, 1) nowait
    for (long long c = 0; c < as_ll(chunks); ++c) {
      err.run([&] { chunk_gradient(graphs, params, traces, static_cast<std::size_t>(c), output_grad, scratch, acc); });
    }
    std::lock_guard lock(mu);
    total += acc;
  }
  err.rethrow();
  return total;
}

}  // namespace

std::vector<ForwardTrace> forward_batch(std::span<const GraphPtr> graphs, const GcnParams& params) {
  std::vector<ForwardTrace> traces(graphs.size());
  FirstError err;
#pragma omp parallel for schedule(dynamic, 1)
  for (long long c = 0; c < as_ll(chunk_count(graphs.size())); ++c) {
    err.run([&] {
      auto block = forward_block(chunk_of(graphs, static_cast<std::size_t>(c)), params);
      std::move(block.begin(), block.end(), traces.begin() + c * static_cast<long long>(kChunk));
    });
  }
  err.rethrow();
  return traces;
}

std::vector<Representation> represent_batch(std::span<const GraphPtr> graphs, const GcnParams& params) {
  std::vector<Representation> reps(graphs.size());
  FirstError err;
#pragma omp parallel for schedule(dynamic, 1)
  for (long long c = 0; c < as_ll(chunk_count(graphs.size())); ++c) {
    err.run([&] {
      auto block = forward_block(chunk_of(graphs, static_cast<std::size_t>(c)), params);
      for (std::size_t j = 0; j < block.size(); ++j) {
        reps[static_cast<std::size_t>(c) * kChunk + j] = {std::move(block[j].h1), std::move(block[j].hg)};
      }
    });
  }
  err.rethrow();
  return reps;
}

BatchResult<TeacherLoss> teacher_objective(std::span<const GraphPtr> graphs, const GcnParams& params,
                                           double eps, Reduction reduction) {
  const auto traces = forward_batch(graphs, params);
  const auto loss = teacher_loss(traces, eps);
  auto grads = reduce_gradients(graphs, params, traces, reduction, [&](std::size_t g, OutputGrads& out) {
    teacher_output_grads(traces[g], loss, graphs.size(), out.d_h1, out.d_hg);
  });
  return {loss, std::move(grads)};
}

BatchResult<StudentLoss> student_objective(std::span<const GraphPtr> graphs,
                                           std::span<const Representation> targets, const GcnParams& params,
                                           LossTerms terms, Reduction reduction) {
  if (targets.size() != graphs.size()) {
    throw PairingError("teacher targets for " + std::to_string(targets.size()) + " graphs, batch has " +
                       std::to_string(graphs.size()));
  }
  const auto traces = forward_batch(graphs, params);
  const auto loss = student_loss(targets, traces, terms);
  auto grads = reduce_gradients(graphs, params, traces, reduction, [&](std::size_t g, OutputGrads& out) {
    student_output_grads(targets[g], traces[g], graphs.size(), terms, out.d_h1, out.d_hg);
  });
  return {loss, std::move(grads)};
}

namespace serial {

std::vector<ForwardTrace> forward_batch(std::span<const GraphPtr> graphs, const GcnParams& params) {
  std::vector<ForwardTrace> traces;
  traces.reserve(graphs.size());
  for (const auto& g : graphs) traces.push_back(forward(*g, params));
  return traces;
}

BatchResult<TeacherLoss> teacher_objective(std::span<const GraphPtr> graphs, const GcnParams& params, double eps) {
  const auto traces = serial::forward_batch(graphs, params);
  const auto loss = teacher_loss(traces, eps);
  GcnGrads grads = GcnGrads::zeros_like(params);
  Matrix d_h1;
  Vector d_hg;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    teacher_output_grads(traces[g], loss, graphs.size(), d_h1, d_hg);
    accumulate_backward(*graphs[g], params, traces[g], d_h1, d_hg, grads);
  }
  return {loss, std::move(grads)};
}

BatchResult<StudentLoss> student_objective(std::span<const GraphPtr> graphs,
                                           std::span<const Representation> targets, const GcnParams& params,
                                           LossTerms terms) {
  if (targets.size() != graphs.size()) throw PairingError("teacher targets and batch differ in length");
  const auto traces = serial::forward_batch(graphs, params);
  const auto loss = student_loss(targets, traces, terms);
  GcnGrads grads = GcnGrads::zeros_like(params);
  Matrix d_h1;
  Vector d_hg;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    student_output_grads(targets[g], traces[g], graphs.size(), terms, d_h1, d_hg);
    accumulate_backward(*graphs[g], params, traces[g], d_h1, d_hg, grads);
  }
  return {loss, std::move(grads)};
}

}  // namespace serial

void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace gladst
