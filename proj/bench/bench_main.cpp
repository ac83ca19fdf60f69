// Serial reference kernels vs their OpenMP counterparts, and window re-mining
// vs incremental batch updates.

#include <benchmark/benchmark.h>

#include <vector>

#include "epistream/counting.hpp"
#include "epistream/datagen.hpp"
#include "epistream/levelwise.hpp"
#include "epistream/miner.hpp"

using namespace epistream;

namespace {

const GeneratedStream& stream() {
  static const GeneratedStream s = [] {
    GenConfig g;
    g.duration = 1500.0;
    return generate_stream(g);
  }();
  return s;
}

const std::vector<Batch>& batches() {
  static const std::vector<Batch> b = stream().batches();
  return b;
}

// All size-3 episodes over the 16 most frequent symbols.
const std::vector<Episode>& patterns() {
  static const std::vector<Episode> p = [] {
    std::vector<Episode> out;
    for (EventType a = 0; a < 16; ++a)
      for (EventType b = 0; b < 16; ++b)
        for (EventType c = 0; c < 16; ++c) out.push_back(Episode{a, b, c});
    return out;
  }();
  return p;
}

void BM_CountManySerial(benchmark::State& state) {
  const auto& events = batches().front().events;
  for (auto _ : state) benchmark::DoNotOptimize(count_many_serial(patterns(), events));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(patterns().size()));
}

void BM_CountManyParallel(benchmark::State& state) {
  const auto& events = batches().front().events;
  for (auto _ : state) benchmark::DoNotOptimize(count_many(patterns(), events));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(patterns().size()));
}

// Cost of producing one complete-window report: Alg 0 re-mines the window,
// Alg 3 folds in one batch. Both run over the first m + 1 batches and the
// timing covers the last step only.
void BM_WindowStep(benchmark::State& state, Variant variant) {
  MinerConfig c;
  c.variant = variant;
  const std::size_t warm = static_cast<std::size_t>(c.m);
  for (auto _ : state) {
    state.PauseTiming();
    auto miner = make_miner(c);
    for (std::size_t s = 0; s < warm; ++s) miner->process(batches()[s]);
    state.ResumeTiming();
    benchmark::DoNotOptimize(miner->process(batches()[warm]));
  }
}

}  // namespace

BENCHMARK(BM_CountManySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountManyParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_WindowStep, alg0_remine, Variant::Alg0)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_WindowStep, alg3_incremental, Variant::Alg3)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
