#include <benchmark/benchmark.h>

#include <vector>

#include "paretobf/gain_region.hpp"
#include "paretobf/hermitian.hpp"
#include "paretobf/network.hpp"
#include "paretobf/pareto.hpp"
#include "paretobf/rng.hpp"

using namespace paretobf;

namespace {

std::vector<CVec> channels(Eigen::Index n, std::size_t k) {
  CounterRng rng(stream_key(7, "bench", static_cast<std::uint64_t>(n)));
  std::vector<CVec> h;
  for (std::size_t l = 0; l < k; ++l) h.push_back(rng.complex_normal_vector(n));
  return h;
}

void BM_DominantEigvec(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto h = channels(n, 3);
  const auto z = weighted_combination(h, SimplexWeight({0.5, 0.3, 0.2}), DirectionVector({1, -1, -1}));
  for (auto _ : state) benchmark::DoNotOptimize(dominant_eigvec(z, h));
}
BENCHMARK(BM_DominantEigvec)->Arg(2)->Arg(3)->Arg(4)->Arg(8);

void BM_SweepBoundary(benchmark::State& state) {
  const auto h = channels(3, 3);
  const DirectionVector e({1, -1, -1});
  for (auto _ : state) benchmark::DoNotOptimize(sweep_boundary(h, e, 0.02));
}
BENCHMARK(BM_SweepBoundary)->Unit(benchmark::kMillisecond);

void BM_ParetoFilter(benchmark::State& state) {
  CounterRng rng(stream_key(7, "bench/points", 0));
  std::vector<UtilityPoint> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {rng.next_uniform(), rng.next_uniform(), rng.next_uniform()};
  for (auto _ : state) benchmark::DoNotOptimize(pareto_filter(pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ParetoFilter)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_UtilitySweepIc3(benchmark::State& state) {
  const Scenario s = generate_channels(909, ic_layout(3, 3, snr_to_noise(10.0)));
  const UtilitySpec spec = UtilitySpec::from_scenario(s);
  for (auto _ : state) benchmark::DoNotOptimize(sweep_utility_region(s, spec, SweepOptions{0.1, 11, 10'000'000}));
}
BENCHMARK(BM_UtilitySweepIc3)->Unit(benchmark::kMillisecond);

void BM_UtilitySweepMixed(benchmark::State& state) {
  const Scenario s = generate_channels(1010, mixed_layout(snr_to_noise(15.0)));
  const UtilitySpec spec = UtilitySpec::from_scenario(s);
  for (auto _ : state) benchmark::DoNotOptimize(sweep_utility_region(s, spec, SweepOptions{0.1, 11, 10'000'000}));
}
BENCHMARK(BM_UtilitySweepMixed)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
