#include <benchmark/benchmark.h>

#include "v2x/v2x.hpp"

namespace {

using namespace v2x;

PopulationSpec fig5_spec() {
  PopulationSpec spec;
  spec.seed = 1;
  spec.toward_source = {{0.5, 0.9}, {0.0, 0.7}};
  spec.toward_destination = {{0.5, 0.9}, {0.0, 0.7}};
  spec.d = 0.004;
  spec.relay_power = {10.0, 25.0};
  spec.noise = {NoisePatternKind::mod3, 1.0, 0.0};
  return spec;
}

const SourceSignal kSource = SourceSignal::scalar(2.0, 18.0);
const DestinationNode kDest{2.0};

void BM_CombinedSnr(benchmark::State& state) {
  const auto pool = generate_population(fig5_spec()).relays;
  const std::span<const RelayNode> relays(pool.data(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(combined_snr(kSource, relays, kDest));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CombinedSnr)->RangeMultiplier(4)->Range(1, 64)->Complexity();

void BM_RankRelays(benchmark::State& state) {
  const auto pool = generate_population(fig5_spec()).relays;
  for (auto _ : state) benchmark::DoNotOptimize(rank_relays(kSource, pool, kDest));
}
BENCHMARK(BM_RankRelays);

void BM_AllocatePower(benchmark::State& state) {
  const auto pool = generate_population(fig5_spec()).relays;
  const auto count = static_cast<std::size_t>(state.range(0));
  const auto b2 = select_topk(kSource, pool, kDest, count, 17.5 * static_cast<double>(count));
  for (auto _ : state) benchmark::DoNotOptimize(allocate_power(kSource, b2, kDest));
}
BENCHMARK(BM_AllocatePower)->Arg(2)->Arg(8)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_SweepCell(benchmark::State& state) {
  const auto pool = generate_population(fig5_spec()).relays;
  const auto algorithm = static_cast<Algorithm>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        algorithm_capacity(algorithm, kSource, pool, kDest, 12, 12 * 17.5, 1.0, {}, 3));
  }
  state.SetLabel(std::string(label(algorithm)));
}
BENCHMARK(BM_SweepCell)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);

void BM_GeneratePopulation(benchmark::State& state) {
  const auto spec = fig5_spec();
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_population(spec, stream++));
}
BENCHMARK(BM_GeneratePopulation);

}  // namespace

BENCHMARK_MAIN();
