#include <benchmark/benchmark.h>

#include "wsim/event_queue.hpp"
#include "wsim/rng.hpp"

static void BM_ScheduleThenDrain(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    wsim::EventQueue<int> queue;
    wsim::SplitMix64 rng(1);
    for (std::size_t i = 0; i < count; ++i)
      queue.schedule(rng.below(1 << 20), static_cast<int>(i));
    while (auto event = queue.next()) benchmark::DoNotOptimize(event->payload);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}
BENCHMARK(BM_ScheduleThenDrain)->Range(1 << 10, 1 << 18);

static void BM_InterleavedWithInvalidation(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    wsim::EventQueue<int> queue;
    wsim::SplitMix64 rng(2);
    for (std::size_t i = 0; i < count; ++i) {
      const auto handle = queue.schedule(queue.clock() + rng.below(64), static_cast<int>(i));
      if (rng.below(4) == 0) queue.invalidate(handle);
      if (rng.below(2) == 0) benchmark::DoNotOptimize(queue.next());
    }
    while (auto event = queue.next()) benchmark::DoNotOptimize(event->payload);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}
BENCHMARK(BM_InterleavedWithInvalidation)->Range(1 << 10, 1 << 16);
