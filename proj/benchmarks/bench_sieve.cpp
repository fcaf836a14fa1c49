#include <benchmark/benchmark.h>

#include "bhlab/sieve.hpp"

using namespace bhlab;

static void BM_PrimesUpTo(benchmark::State& state) {
  const auto bound = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(primes_up_to(bound).primes.size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PrimesUpTo)->Arg(1 << 20)->Arg(1 << 24);

static void BM_SieveAvoid(benchmark::State& state) {
  const auto family = ResidueFamily::random(50, 3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(count_avoid(family, 1000000, 1000000));
  state.SetItemsProcessed(state.iterations() * 1000000);
}
BENCHMARK(BM_SieveAvoid);

static void BM_SmallFactorMarks(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(small_factor_marks(1000000, 2000000, 1000).count());
  state.SetItemsProcessed(state.iterations() * 1000000);
}
BENCHMARK(BM_SmallFactorMarks);

static void BM_IsPrime(benchmark::State& state) {
  std::uint64_t n = 1000000000000000003ULL;
  for (auto _ : state) benchmark::DoNotOptimize(is_prime(n += 2));
}
BENCHMARK(BM_IsPrime);
