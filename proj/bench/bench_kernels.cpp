// Serial reference vs OpenMP kernels on the standard synthetic fixture
// (120 graphs, d-512-256). The second argument of the parallel cases is the
// thread count.

#include <benchmark/benchmark.h>

#include "gladst/kernels.hpp"
#include "gladst/scoring.hpp"
#include "gladst/synth.hpp"

namespace {

using namespace gladst;

const GraphDataset& fixture() {
  static const GraphDataset ds = generate_synthetic(SynthSpec{});
  return ds;
}

const GcnParams& params(std::uint64_t seed) {
  static const GcnParams a = init_params(1, 1), b = init_params(1, 2);
  return seed == 1 ? a : b;
}

const std::vector<Representation>& targets() {
  static const auto t = represent_batch(fixture().graphs, params(2));
  return t;
}

void BM_ForwardSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::forward_batch(fixture().graphs, params(1)));
}

void BM_ForwardParallel(benchmark::State& state) {
  set_thread_count(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(forward_batch(fixture().graphs, params(1)));
}

void BM_TeacherSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::teacher_objective(fixture().graphs, params(1), 1e-8));
}

void BM_TeacherParallel(benchmark::State& state) {
  const auto red = state.range(0) == 0 ? Reduction::ordered : Reduction::unordered;
  set_thread_count(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(teacher_objective(fixture().graphs, params(1), 1e-8, red));
}

void BM_StudentSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(serial::student_objective(fixture().graphs, targets(), params(1), {}));
}

void BM_StudentParallel(benchmark::State& state) {
  const auto red = state.range(0) == 0 ? Reduction::ordered : Reduction::unordered;
  set_thread_count(static_cast<int>(state.range(1)));
  for (auto _ : state)
    benchmark::DoNotOptimize(student_objective(fixture().graphs, targets(), params(1), {}, red));
}

void BM_ScoreDataset(benchmark::State& state) {
  set_thread_count(static_cast<int>(state.range(0)));
  ModelTriple m{params(1), params(2), init_params(1, 3), 1, 0, {}};
  for (auto _ : state) benchmark::DoNotOptimize(score_dataset(fixture(), m));
}

void thread_args(benchmark::internal::Benchmark* b) {
  for (int reduction : {0, 1})
    for (int threads : {1, 2, 4, 8}) b->Args({reduction, threads});
}

}  // namespace

BENCHMARK(BM_ForwardSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForwardParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TeacherSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TeacherParallel)->Apply(thread_args)->ArgNames({"unordered", "threads"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StudentSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StudentParallel)->Apply(thread_args)->ArgNames({"unordered", "threads"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreDataset)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
