#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsim/config.hpp"
#include "wsim/simulation.hpp"

namespace wsim {

// Cartesian experiment grid. Configuration index k enumerates
// (W, p, lambda, policy, threshold) with W outermost and threshold
// innermost; replication r of configuration k runs with seed
// base_seed + k * replications + r, so any single run can be reproduced in
// isolation.
struct SweepSpec {
  std::vector<WorkAmount> work_values;
  std::vector<std::uint32_t> proc_values;
  std::vector<Time> latency_values;
  std::vector<Policy> policies{Policy::MWT};
  std::vector<bool> thresholds{true};
  std::uint64_t replications = 1;
  std::uint64_t base_seed = 0;
  std::string output_path;
  std::string summary_output_path;

  std::size_t config_count() const;
  void validate() const;
};

// Parses the key=value sweep grammar (see README). Statements are separated
// by newlines or ';', '#' starts a comment, integer lists are comma-separated
// values or lo:hi:mult geometric ranges. Unknown keys and malformed values
// throw std::invalid_argument with the offending line number.
SweepSpec parse_sweep(std::string_view text);

// All grid configurations in canonical order, seeds not yet assigned.
std::vector<SimConfig> enumerate_configs(const SweepSpec& spec);

// Runs every configuration with `threads` workers (0 = hardware
// concurrency). Results come back ordered by (configuration index,
// replication) regardless of execution interleaving.
std::vector<SimResult> run_sweep(const SweepSpec& spec, unsigned threads = 0);

// Same worker pool for an explicit list of ready-to-run configs.
std::vector<SimResult> run_configs(std::span<const SimConfig> configs, unsigned threads = 0);

}  // namespace wsim
