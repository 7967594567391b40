#include <benchmark/benchmark.h>

#include "wsim/simulation.hpp"

namespace {

wsim::SimConfig config_for(std::int64_t work, std::int64_t procs, std::int64_t latency) {
  wsim::SimConfig config;
  config.total_work = static_cast<wsim::WorkAmount>(work);
  config.num_procs = static_cast<std::uint32_t>(procs);
  config.latency = static_cast<wsim::Time>(latency);
  config.record_trace = false;
  return config;
}

}  // namespace

static void BM_Run(benchmark::State& state) {
  wsim::SimConfig config = config_for(state.range(0), state.range(1), state.range(2));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = seed++;
    benchmark::DoNotOptimize(wsim::run_simulation(config).result.makespan);
  }
}
BENCHMARK(BM_Run)
    ->Args({1000000, 64, 2})
    ->Args({1000000, 64, 100})
    ->Args({1000000, 64, 500})
    ->Args({10000000, 128, 262})
    ->Unit(benchmark::kMicrosecond);

static void BM_RunWithTrace(benchmark::State& state) {
  wsim::SimConfig config = config_for(1000000, 64, 100);
  config.record_trace = true;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = seed++;
    benchmark::DoNotOptimize(wsim::run_simulation(config).trace.records.size());
  }
}
BENCHMARK(BM_RunWithTrace)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
