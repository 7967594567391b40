#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wsim/simulation.hpp"

namespace wsim {

inline constexpr const char* kResultsHeader =
    "W,p,lambda,policy,threshold,seed,makespan,requests_total,requests_granted,"
    "requests_failed,startup_end,shutdown_start";

// One results row; the file projection of a SimResult.
struct ResultRow {
  WorkAmount total_work = 0;
  std::uint32_t num_procs = 0;
  Time latency = 0;
  Policy policy = Policy::MWT;
  bool threshold_enabled = false;
  std::uint64_t seed = 0;
  Time makespan = 0;
  std::uint64_t requests_total = 0;
  std::uint64_t requests_granted = 0;
  std::uint64_t requests_failed = 0;
  Time startup_end = 0;
  Time shutdown_start = 0;

  bool operator==(const ResultRow&) const = default;
};

ResultRow to_row(const SimResult& result);

// CSV with the exact header above, one row per run, integers in decimal,
// rows ordered by (W, p, lambda, policy, threshold, seed). Throws on empty
// input; I/O errors carry the path.
void write_results(std::span<const SimResult> results, const std::string& path);
void write_results(std::span<const ResultRow> rows, std::ostream& out);

std::vector<ResultRow> read_results(const std::string& path);
std::vector<ResultRow> read_results(std::istream& in);

// JSON mirror of the CSV: an array of objects carrying the same fields in
// the same order.
void write_results_json(std::span<const SimResult> results, const std::string& path);

// Full single-run report: parameters, counters, phase boundaries and
// per-processor busy/idle totals (plus snapshots when requested).
std::string to_json(const SimResult& result);

// Per-configuration aggregation of a sweep: boxplot stats of the makespan
// plus mean steal counts and mean phase boundaries, one row per
// configuration in grid order.
void write_summary(std::span<const SimResult> results, const std::string& path);
void write_summary(std::span<const SimResult> results, std::ostream& out);

// Victim script files: one "thief victim" pair per line, '#' comments.
std::vector<VictimScriptEntry> parse_victim_script(std::istream& in);
std::vector<VictimScriptEntry> load_victim_script(const std::string& path);

}  // namespace wsim
