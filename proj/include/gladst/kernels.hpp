#pragma once

#include <span>
#include <vector>

#include "gladst/gcn.hpp"
#include "gladst/losses.hpp"

namespace gladst {

/// How per-graph gradients are summed in the OpenMP kernels.
///
/// ordered: graphs are summed in fixed index-order chunks, then chunks in
///          order, so results are bitwise independent of thread count.
/// unordered: per-thread accumulators merged as threads finish.
enum class Reduction { ordered, unordered };

template <typename Loss>
struct BatchResult {
  Loss loss;
  GcnGrads grads;
};

std::vector<ForwardTrace> forward_batch(std::span<const GraphPtr> graphs, const GcnParams& params);
std::vector<Representation> represent_batch(std::span<const GraphPtr> graphs,
                                            const GcnParams& params);

BatchResult<TeacherLoss> teacher_objective(std::span<const GraphPtr> graphs,
                                           const GcnParams& params, double eps,
                                           Reduction reduction = Reduction::ordered);

BatchResult<StudentLoss> student_objective(std::span<const GraphPtr> graphs,
                                           std::span<const Representation> targets,
                                           const GcnParams& params, LossTerms terms,
                                           Reduction reduction = Reduction::ordered);

/// Single-threaded references with a plain left-to-right accumulation. Kept
/// for cross-checking the parallel kernels and for benchmarking.
namespace serial {

std::vector<ForwardTrace> forward_batch(std::span<const GraphPtr> graphs, const GcnParams& params);

BatchResult<TeacherLoss> teacher_objective(std::span<const GraphPtr> graphs,
                                           const GcnParams& params, double eps);

BatchResult<StudentLoss> student_objective(std::span<const GraphPtr> graphs,
                                           std::span<const Representation> targets,
                                           const GcnParams& params, LossTerms terms);

}  // namespace serial

/// Sets the OpenMP thread count; n <= 0 keeps the runtime default.
void set_thread_count(int n);
int thread_count();

}  // namespace gladst
