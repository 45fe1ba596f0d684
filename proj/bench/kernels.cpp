// Serial reference vs OpenMP kernel for each parallel search.
#include "lopc/asymptotic.hpp"
#include "lopc/catalysis.hpp"
#include "lopc/engine.hpp"

#include <benchmark/benchmark.h>

using namespace lopc;

namespace {

template <auto Search>
void catalyst_scan(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  // Entropy would have to grow, so every candidate is scanned.
  for (auto _ : state) benchmark::DoNotOptimize(Search(SecrecySpectrum::uniform(2), SecrecySpectrum::uniform(3), dim, 12));
}

template <auto Block>
void concentration(benchmark::State& state) {
  const auto p = SecrecySpectrum::parse("1/2,1/5,1/5,1/10");
  const auto N = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Block(p, N));
}

JointDist full_grid(int n) {
  std::map<Outcome, Prob> entries;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a == b || (a + 1) % n == b) entries[{a, b, 0}] = frac(1, 2L * n);
  auto parties = honest({{"A", n}, {"B", n}});
  parties.push_back(eve());
  return JointDist(std::move(parties), std::move(entries));
}

template <auto Search>
void purity_search(benchmark::State& state) {
  const auto d = full_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Search(d));
}

}  // namespace

BENCHMARK(catalyst_scan<serial::find_catalyst>)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(catalyst_scan<find_catalyst>)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(concentration<serial::concentrate_block>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(concentration<concentrate_block>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(purity_search<serial::single_copy_pure_search>)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(purity_search<single_copy_pure_search>)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
