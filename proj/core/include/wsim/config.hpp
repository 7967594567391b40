#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "wsim/types.hpp"

namespace wsim {

// Steal-response policy. An SWT victim sends work to at most one thief at a
// time and fails everyone else while its transfer channel is busy; an MWT
// victim may have several grants in flight and serves same-instant requests
// sequentially, each against the post-grant residue.
enum class Policy : std::uint8_t { SWT, MWT };

const char* to_string(Policy policy);
std::optional<Policy> parse_policy(std::string_view text);

// Deterministic victim choice for golden-trace tests: the next pending entry
// for a given thief overrides the random draw and is consumed.
struct VictimScriptEntry {
  ProcId thief = 0;
  ProcId victim = 0;
  bool operator==(const VictimScriptEntry&) const = default;
};

// Full parameterization of one run.
struct SimConfig {
  WorkAmount total_work = 1;
  std::uint32_t num_procs = 1;
  Time latency = 1;
  Policy policy = Policy::MWT;
  bool threshold_enabled = true;
  std::optional<WorkAmount> threshold_value;  // defaults to 2 * latency
  std::uint64_t seed = 0;
  std::vector<VictimScriptEntry> victim_script;

  // Tooling hooks. Traces can be skipped in large sweeps; invariant checking
  // validates work conservation after every event; snapshot_times asks for
  // the per-processor remaining work at those instants (ascending).
  bool record_trace = true;
  bool check_invariants = false;
  std::vector<Time> snapshot_times;

  WorkAmount effective_threshold() const {
    return threshold_value ? *threshold_value : 2 * latency;
  }

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

}  // namespace wsim
