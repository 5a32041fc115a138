// Exact skyline engines on in-memory data. Args: {n, d, distribution}.

#include <benchmark/benchmark.h>

#include "bench_fixture.hpp"
#include "skysample/skyline.hpp"

namespace skysample::bench {
namespace {

template <Engine E>
void BM_Skyline(benchmark::State& state) {
  const auto dist = static_cast<Distribution>(state.range(2));
  const auto& t = records(dist, static_cast<std::uint64_t>(state.range(0)),
                          static_cast<std::uint32_t>(state.range(1)));
  std::size_t size = 0;
  std::uint64_t comparisons = 0;
  for (auto _ : state) {
    auto r = compute_skyline(E, t);
    size = r.members.size();
    comparisons = r.comparisons;
    benchmark::DoNotOptimize(r);
  }
  state.SetLabel(std::string(distribution_name(dist)));
  state.counters["skyline"] = static_cast<double>(size);
  state.counters["comparisons"] = static_cast<double>(comparisons);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void grid(benchmark::internal::Benchmark* b) {
  for (int dist : {0, 2}) {
    for (int d : {2, 4}) {
      for (int n : {1'000, 10'000, 100'000}) b->Args({n, d, dist});
    }
  }
  b->Unit(benchmark::kMillisecond);
}

BENCHMARK(BM_Skyline<Engine::kBnl>)->Apply(grid);
BENCHMARK(BM_Skyline<Engine::kSfs>)->Apply(grid);
BENCHMARK(BM_Skyline<Engine::kDc>)->Apply(grid);

// Brute force is quadratic; keep it to the small end.
BENCHMARK(BM_Skyline<Engine::kBrute>)
    ->Args({1'000, 2, 0})
    ->Args({1'000, 4, 2})
    ->Args({10'000, 4, 2})
    ->Unit(benchmark::kMillisecond);

// Small windows force spill passes.
void BM_BnlWindow(benchmark::State& state) {
  const auto& t = records(Distribution::kAnticorrelated, 100'000, 4);
  const auto window = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bnl_skyline(t, window));
}
BENCHMARK(BM_BnlWindow)->RangeMultiplier(8)->Range(8, 32768)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace skysample::bench
