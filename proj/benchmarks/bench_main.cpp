#include <random>

#include <benchmark/benchmark.h>

#include "quasiflow/flow.hpp"
#include "quasiflow/kspectrum.hpp"
#include "quasiflow/pipeline.hpp"
#include "quasiflow/simulate.hpp"

using namespace quasiflow;

namespace {

ReadSet sample_reads(double coverage, double error_rate) {
  const HaplotypeSample sample = simulate_sample(2000, 2, 0.02, {0.3, 0.7}, 1);
  ReadSimOptions o;
  o.coverage = coverage;
  o.error_rate = error_rate;
  o.seed = 2;
  return simulate_reads(sample, o);
}

void BM_CountKmers(benchmark::State& state) {
  const ReadSet reads = sample_reads(200, 0.003);
  CountOptions o;
  o.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_kmers(reads, 41, o));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(reads.pairs.size()) * 2);
}
BENCHMARK(BM_CountKmers)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_KdeThreshold(benchmark::State& state) {
  const auto hist = count_kmers(sample_reads(200, 0.003), 41).histogram();
  for (auto _ : state) benchmark::DoNotOptimize(kde_threshold(hist));
}
BENCHMARK(BM_KdeThreshold)->Unit(benchmark::kMillisecond);

void BM_MinCostFlow(benchmark::State& state) {
  // Layered DAG with noisy coverages.
  const auto width = static_cast<std::uint32_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> cov(0, 40);
  CoverageGraph g(width * 4);
  for (std::uint32_t layer = 0; layer + 1 < 4; ++layer) {
    for (std::uint32_t i = 0; i < width; ++i) {
      for (std::uint32_t j = 0; j < width; ++j) {
        if ((i + j) % 2 == 0) g.add_edge(layer * width + i, (layer + 1) * width + j, cov(rng));
      }
    }
  }
  const OffsetFlowNetwork net = build_offset_network(g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_min_cost_flow(net));
}
BENCHMARK(BM_MinCostFlow)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  const ReadSet reads = sample_reads(200, state.range(0) == 0 ? 0.0 : 0.003);
  AssembleOptions o;
  o.k = 41;
  for (auto _ : state) benchmark::DoNotOptimize(assemble(reads, o));
}
BENCHMARK(BM_Assemble)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
