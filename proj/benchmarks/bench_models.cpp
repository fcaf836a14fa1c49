#include <benchmark/benchmark.h>

#include "bhlab/models.hpp"

using namespace bhlab;

static void BM_Materialize(benchmark::State& state) {
  ModelSpec spec;
  spec.kind = static_cast<ModelKind>(state.range(0));
  spec.seed = 3;
  const SetInstance inst(spec);
  for (auto _ : state) benchmark::DoNotOptimize(inst.materialize(1000000, 2000000).count());
  state.SetLabel(to_string(spec.kind));
  state.SetItemsProcessed(state.iterations() * 1000000);
}
BENCHMARK(BM_Materialize)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

static void BM_PointMembership(benchmark::State& state) {
  ModelSpec spec;
  spec.kind = ModelKind::m2;
  const SetInstance inst(spec);
  std::uint64_t m = 1000001;
  for (auto _ : state) benchmark::DoNotOptimize(inst.member(m += 2));
}
BENCHMARK(BM_PointMembership);
