// Sampling, verification and DOUBLE on a 1e6-tuple relation file. Page
// counters are per iteration.

#include <benchmark/benchmark.h>

#include "bench_fixture.hpp"
#include "skysample/approx.hpp"
#include "skysample/coverage.hpp"
#include "skysample/rng.hpp"
#include "skysample/sampling.hpp"

namespace skysample::bench {
namespace {

constexpr std::uint64_t kN = 1'000'000;

void BM_FloydSubset(benchmark::State& state) {
  SplitMix64 rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(floyd_subset(kN, static_cast<std::uint64_t>(state.range(0)), rng));
  }
}
BENCHMARK(BM_FloydSubset)->RangeMultiplier(10)->Range(100, 100'000);

void BM_SampleWithoutReplacement(benchmark::State& state) {
  const auto& rel = relation(Distribution::kIndependent, kN, 2);
  const auto m = static_cast<std::uint64_t>(state.range(0));
  IoCounter io;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_without_replacement(rel, m, ++seed, io));
  state.counters["pages"] = benchmark::Counter(static_cast<double>(io.pages_read),
                                               benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_SampleWithoutReplacement)
    ->RangeMultiplier(10)
    ->Range(100, 100'000)
    ->Unit(benchmark::kMillisecond);

void BM_Baseline(benchmark::State& state) {
  const auto& rel = relation(Distribution::kIndependent, kN, 4);
  const auto m = static_cast<std::uint64_t>(state.range(0));
  IoCounter io;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(baseline(rel, m, Engine::kDc, ++seed, io));
  state.counters["pages"] = benchmark::Counter(static_cast<double>(io.pages_read),
                                               benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_Baseline)->RangeMultiplier(10)->Range(1'000, 100'000)->Unit(benchmark::kMillisecond);

void BM_VerifyError(benchmark::State& state) {
  const auto& rel = relation(Distribution::kIndependent, kN, 2);
  IoCounter io;
  const auto approx = baseline(rel, 1000, Engine::kDc, 1, io).members;
  const auto s_v = required_verification_size(kN, 0.1, 0.1);
  std::uint64_t seed = 0;
  IoCounter vio;
  for (auto _ : state) benchmark::DoNotOptimize(verify_error(approx, rel, s_v, ++seed, vio));
  state.counters["s_v"] = static_cast<double>(s_v);
}
BENCHMARK(BM_VerifyError)->Unit(benchmark::kMicrosecond);

void BM_Double(benchmark::State& state) {
  const auto& rel = relation(Distribution::kIndependent, kN, static_cast<std::uint32_t>(state.range(1)));
  ApproxParams params;
  params.epsilon = static_cast<double>(state.range(0)) / 1000.0;
  IoCounter io;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(double_skyline(rel, params, ++seed, io));
  state.counters["pages"] = benchmark::Counter(static_cast<double>(io.pages_read),
                                               benchmark::Counter::kAvgIterations);
}
// Args: {epsilon in thousandths, d}.
BENCHMARK(BM_Double)
    ->Args({100, 2})
    ->Args({50, 2})
    ->Args({10, 2})
    ->Args({100, 4})
    ->Unit(benchmark::kMillisecond);

void BM_CoverageOracle(benchmark::State& state) {
  const auto d = static_cast<std::uint32_t>(state.range(0));
  const auto& rel = relation(Distribution::kIndependent, kN, d);
  IoCounter io;
  const auto oracle = CoverageOracle::load(rel, io);
  const auto approx = baseline(rel, 10'000, Engine::kDc, 1, io).members;
  for (auto _ : state) benchmark::DoNotOptimize(oracle.error_of(approx));
  state.counters["approx"] = static_cast<double>(approx.size());
}
BENCHMARK(BM_CoverageOracle)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace skysample::bench
