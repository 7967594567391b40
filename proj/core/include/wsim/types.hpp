#pragma once

#include <cstdint>

namespace wsim {

// All quantities are integer time units: one unit of work takes one unit of
// time on any processor, and a message takes `latency` units end to end.
using Time = std::uint64_t;
using WorkAmount = std::uint64_t;
using ProcId = std::uint32_t;

}  // namespace wsim
