#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "wsim/config.hpp"
#include "wsim/rng.hpp"
#include "wsim/trace.hpp"
#include "wsim/types.hpp"

namespace wsim {

struct Message {
  enum class Kind : std::uint8_t { StealRequest, GrantResponse, FailResponse };
  Kind kind = Kind::StealRequest;
  ProcId from = 0;
  ProcId to = 0;
  WorkAmount work_amount = 0;  // grants only
  Time send_time = 0;
  Time arrival_time = 0;  // always send_time + latency
};

struct WorkSplit {
  WorkAmount kept = 0;
  WorkAmount sent = 0;
  bool operator==(const WorkSplit&) const = default;
};

// Halves a divisible load; the victim keeps the larger part.
constexpr WorkSplit split_work(WorkAmount w) { return {w - w / 2, w / 2}; }

// Grant/fail ladder for a steal request reaching a victim that holds
// `victim_work` units at time `now` (the victim kept computing while the
// request was in flight). Returns the split to transfer, or nullopt for a
// fail response. A victim under 2 units cannot grant: the transferable half
// would be empty. The threshold comparison is strict, so exactly 2*latency
// units may still be granted.
std::optional<WorkSplit> steal_decision(WorkAmount victim_work, Time now, Policy policy,
                                        bool threshold_enabled, WorkAmount threshold_value,
                                        Time transfer_busy_until);

// Uniform victim selection over the other processors, with script override.
// A single PRNG stream per run keeps victim sequences reproducible.
class VictimSelector {
 public:
  VictimSelector(std::uint64_t seed, std::uint32_t num_procs,
                 std::span<const VictimScriptEntry> script);

  // Throws std::logic_error when no victim exists (num_procs == 1).
  ProcId choose(ProcId thief);

 private:
  SplitMix64 rng_;
  std::uint32_t num_procs_;
  std::vector<std::deque<ProcId>> scripted_;
};

struct SimResult {
  SimConfig config;  // echo, includes the seed
  Time makespan = 0;
  std::uint64_t requests_total = 0;
  std::uint64_t requests_granted = 0;
  std::uint64_t requests_failed = 0;
  Time startup_end = 0;     // first instant every processor has been active
  Time shutdown_start = 0;  // busy processors permanently below ceil(p/2)
  std::vector<std::uint64_t> busy_time;  // per processor; sums to total_work
  std::vector<std::uint64_t> idle_time;  // makespan - busy_time[i]

  // Remaining work per processor at each config.snapshot_times instant,
  // evaluated after all events at that instant have been processed.
  std::vector<std::vector<WorkAmount>> snapshots;

  std::uint64_t seed() const { return config.seed; }
  bool operator==(const SimResult&) const = default;
};

struct RunOutput {
  SimResult result;
  EventTrace trace;
};

// Executes one full run: processor 0 starts with the whole load and everyone
// else immediately begins stealing. The run ends when all work is executed
// and in-flight fail responses have drained. Identical configs produce
// identical results and traces.
RunOutput run_simulation(const SimConfig& config);

}  // namespace wsim
