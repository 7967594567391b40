#pragma once

#include <cstddef>
#include <span>

#include "wsim/trace.hpp"
#include "wsim/types.hpp"

namespace wsim {

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0;
  double stddev = 0;
  double min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double max = 0;
};

// Boxplot summary. Quartiles use the median-of-halves convention: for odd n
// the overall median is excluded from both halves. Stddev is the sample
// standard deviation, 0 when n == 1. Throws std::invalid_argument on an
// empty sample.
SummaryStats summarize(std::span<const double> values);

// Latest instant any processor executes work, i.e. the last working-to-idle
// transition in the trace.
Time trace_makespan(const EventTrace& trace);

// Earliest time at which every processor has been active at least once
// (processor 0 is active from t = 0). Returns the makespan when some
// processor never receives work.
Time detect_startup_end(const EventTrace& trace);

// Earliest time >= startup_end after which fewer than ceil(p/2) processors
// hold work, permanently.
Time detect_shutdown_start(const EventTrace& trace);

}  // namespace wsim
