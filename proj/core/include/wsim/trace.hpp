#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wsim/types.hpp"

namespace wsim {

enum class TraceKind : std::uint8_t { StateChange, MessageSend, MessageRecv };
enum class Activity : std::uint8_t { Working, Idle, Transferring };

// One timeline entry, appended in event order (nondecreasing time; ties in
// processing order). Message records encode their kind through work_amount:
// no value = steal request, value >= 1 = grant, value 0 = fail response.
// MessageSend.proc is the sender, MessageRecv.proc the receiver; `peer` is
// the other endpoint. Every send has a matching receive exactly one latency
// later.
struct TraceRecord {
  Time time = 0;
  TraceKind kind = TraceKind::StateChange;
  ProcId proc = 0;
  std::optional<ProcId> peer;
  std::optional<Activity> state;
  std::optional<WorkAmount> work_amount;

  bool operator==(const TraceRecord&) const = default;
};

enum class LinkKind : std::uint8_t { Request, Grant, Fail };

// Classifies a message record; meaningless for StateChange records.
inline LinkKind link_kind(const TraceRecord& record) {
  if (!record.work_amount) return LinkKind::Request;
  return *record.work_amount == 0 ? LinkKind::Fail : LinkKind::Grant;
}

struct EventTrace {
  std::uint32_t num_procs = 0;
  Time latency = 0;
  std::vector<TraceRecord> records;

  bool operator==(const EventTrace&) const = default;
};

}  // namespace wsim
