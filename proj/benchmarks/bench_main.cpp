#include <benchmark/benchmark.h>

#include "nibble/baselines.hpp"
#include "nibble/basic.hpp"
#include "nibble/dynamic.hpp"
#include "nibble/generators.hpp"
#include "nibble/random_order.hpp"

using namespace nibble;

namespace {

void BM_GreedyOnline(benchmark::State& state) {
  const auto delta = static_cast<std::size_t>(state.range(0));
  const Graph g = gen_near_regular(2000, delta, 0.0, 1);
  const EdgeStream s = gen_random_order_stream(g, 2);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_online(s, 2000));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * s.size()));
}
BENCHMARK(BM_GreedyOnline)->Arg(64)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Basic(benchmark::State& state) {
  const auto delta = static_cast<std::size_t>(state.range(0));
  const Graph g = gen_near_regular(2000, delta, 0.0, 1);
  const Params p = derive_params(2000, delta, 0.05, 1);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(++seed);
    benchmark::DoNotOptimize(run_basic(g, p, rng));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.edge_count()));
}
BENCHMARK(BM_Basic)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Warmup(benchmark::State& state) {
  const auto delta = static_cast<std::size_t>(state.range(0));
  const Graph g = gen_near_regular(2000, delta, 0.0, 1);
  const EdgeStream s = gen_random_order_stream(g, 2);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(++seed);
    benchmark::DoNotOptimize(run_warmup(s, 2000, delta, s.size(), 0.1, 1, rng));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * s.size()));
}
BENCHMARK(BM_Warmup)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_General(benchmark::State& state) {
  const Graph g = gen_near_regular(300, 100, 0.3, 1);
  const EdgeStream s = gen_random_order_stream(g, 2);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(++seed);
    benchmark::DoNotOptimize(run_general(s, 300, 100, 0.1, 1, rng));
  }
}
BENCHMARK(BM_General)->Unit(benchmark::kMillisecond);

void BM_DynamicUpdate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t delta = 64;
  const Params p = make_params(n * (delta + 1), delta, 0.2, 1, round_count(0.2, 1));
  const UpdateStream ups = gen_update_sequence(n, delta, 4000, 0.5, 3);
  for (auto _ : state) {
    state.PauseTiming();
    DynamicColorer dc(n, p, 7);
    state.ResumeTiming();
    for (const Update& up : ups) benchmark::DoNotOptimize(dc.apply(up));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * ups.size()));
}
BENCHMARK(BM_DynamicUpdate)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_PaletteElement(benchmark::State& state) {
  BlockedColors b(2, 1001);
  Rng rng(1);
  for (int k = 0; k < 600; ++k) b.block(static_cast<NodeId>(k % 2), static_cast<Color>(1 + uniform_index(rng, 1001)));
  const std::size_t size = b.palette_size(0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(b.palette_element(0, 1, uniform_index(rng, size)));
}
BENCHMARK(BM_PaletteElement);

}  // namespace
BENCHMARK_MAIN();
