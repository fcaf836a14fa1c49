#include <benchmark/benchmark.h>

#include "bhlab/localroots.hpp"
#include "bhlab/sieve.hpp"

using namespace bhlab;

static void BM_NuValues(benchmark::State& state) {
  const auto tuple = normalize_tuple(parse_tuple(state.range(0) == 0 ? "X,X+2" : "X^2+1,X^2+3"));
  const auto primes = primes_up_to(1000000);
  for (auto _ : state) benchmark::DoNotOptimize(nu_values(tuple, primes.primes).size());
  state.SetItemsProcessed(state.iterations() * primes.primes.size());
}
BENCHMARK(BM_NuValues)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_RootsModP(benchmark::State& state) {
  const auto f = Polynomial::parse("X^4+3X^2+7X+1");
  const std::uint64_t p = 1000003;
  for (auto _ : state) benchmark::DoNotOptimize(roots_mod_p(f, p).size());
}
BENCHMARK(BM_RootsModP);
