#include "wsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace wsim {

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  const auto median_of = [](std::span<const double> s) {
    const std::size_t m = s.size();
    return m % 2 ? s[m / 2] : (s[m / 2 - 1] + s[m / 2]) / 2.0;
  };

  SummaryStats stats;
  stats.n = n;
  stats.min = sorted.front();
  stats.max = sorted.back();
  stats.median = median_of(sorted);
  if (n == 1) {
    stats.q1 = stats.q3 = sorted[0];
  } else {
    const std::size_t half = n / 2;  // excludes the middle element for odd n
    stats.q1 = median_of(std::span(sorted).first(half));
    stats.q3 = median_of(std::span(sorted).last(half));
  }
  stats.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  if (n > 1) {
    double ss = 0;
    for (double v : sorted) ss += (v - stats.mean) * (v - stats.mean);
    stats.stddev = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return stats;
}

Time trace_makespan(const EventTrace& trace) {
  Time makespan = 0;
  for (const auto& record : trace.records)
    if (record.kind == TraceKind::StateChange && record.state == Activity::Idle)
      makespan = std::max(makespan, record.time);
  return makespan;
}

Time detect_startup_end(const EventTrace& trace) {
  std::vector<char> seen(trace.num_procs, 0);
  std::uint32_t active = 0;
  for (const auto& record : trace.records) {
    if (record.kind != TraceKind::StateChange || record.state != Activity::Working) continue;
    if (!seen[record.proc]) {
      seen[record.proc] = 1;
      if (++active == trace.num_procs) return record.time;
    }
  }
  return trace_makespan(trace);
}

Time detect_shutdown_start(const EventTrace& trace) {
  const Time startup = detect_startup_end(trace);
  const std::uint32_t half = (trace.num_procs + 1) / 2;
  std::vector<char> working(trace.num_procs, 0);
  std::uint32_t count = 0;
  Time last_drop = startup;
  for (const auto& record : trace.records) {
    if (record.kind != TraceKind::StateChange) continue;
    const char now = record.state == Activity::Working ? 1 : 0;
    if (working[record.proc] == now) continue;
    const bool was_at_half = count >= half;
    working[record.proc] = now;
    count += now ? 1u : -1u;
    if (was_at_half && count < half) last_drop = record.time;
  }
  return std::max(startup, last_drop);
}

}  // namespace wsim
