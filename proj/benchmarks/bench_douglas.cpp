#include <benchmark/benchmark.h>

#include "douglaskit/douglaskit.hpp"

namespace {

using namespace douglaskit;

ModuleShape square_shape(int n) { return ModuleShape(AlgebraShape({1}), {n}); }

struct Instance {
  AdjointableOperator t;
  AdjointableOperator tp;
};

Instance solvable(int n, std::uint64_t seed) {
  Sampler s(seed);
  const ModuleShape shape = square_shape(n);
  Instance inst;
  inst.t = s.op(shape, shape);
  inst.tp = compose(inst.t, s.op(shape, shape));
  return inst;
}

void BM_DouglasSolve(benchmark::State& state) {
  const Instance inst = solvable(static_cast<int>(state.range(0)), 17);
  for (auto _ : state)
    benchmark::DoNotOptimize(douglas_solve(inst.tp, inst.t));
}
BENCHMARK(BM_DouglasSolve)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_MinimalLambda(benchmark::State& state) {
  const Instance inst = solvable(static_cast<int>(state.range(0)), 18);
  for (auto _ : state)
    benchmark::DoNotOptimize(minimal_lambda(inst.tp, inst.t));
}
BENCHMARK(BM_MinimalLambda)->Arg(4)->Arg(16)->Arg(64);

void BM_TheoremReport(benchmark::State& state) {
  const Instance inst = solvable(static_cast<int>(state.range(0)), 19);
  for (auto _ : state)
    benchmark::DoNotOptimize(theorem_report(inst.tp, inst.t));
}
BENCHMARK(BM_TheoremReport)->Arg(4)->Arg(8)->Arg(16);

void BM_LemmaWitness(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Sampler s(23);
  const AlgebraShape shape({n});
  AlgebraElement bump = s.positive(shape);
  bump = (1.0 / norm(bump)) * bump;
  const AlgebraElement a = AlgebraElement::identity(shape) + bump;
  const AlgebraElement b = 0.5 * AlgebraElement::identity(shape);
  for (auto _ : state) benchmark::DoNotOptimize(lemma_witness(a, b));
}
BENCHMARK(BM_LemmaWitness)->Arg(4)->Arg(16)->Arg(64);

void BM_ObstructionSweep(benchmark::State& state) {
  const TruncationFamily fam =
      TruncationFamily::harmonic({static_cast<int>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(obstruction_sweep(fam));
}
BENCHMARK(BM_ObstructionSweep)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
