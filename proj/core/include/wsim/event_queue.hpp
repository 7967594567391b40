#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsim/types.hpp"

namespace wsim {

// Discrete-event core: a virtual clock plus a pending queue ordered by
// (time, insertion sequence). Equal times pop in insertion order, which makes
// every run fully deterministic. Scheduled events may be invalidated later;
// invalid entries are skipped lazily on pop instead of being removed from the
// heap.
template <typename Payload>
class EventQueue {
 public:
  using Handle = std::uint64_t;

  struct Event {
    Time time = 0;
    std::uint64_t seq = 0;
    Payload payload{};
  };

  // Schedules `payload` at `time` and returns a handle usable with
  // invalidate(). Scheduling before the current clock is a programming error
  // and is rejected loudly rather than silently reordered.
  Handle schedule(Time time, Payload payload) {
    if (time < clock_) {
      throw std::logic_error("EventQueue::schedule: event time " + std::to_string(time) +
                             " is before clock " + std::to_string(clock_));
    }
    const Handle handle = next_seq_++;
    alive_.push_back(1);
    heap_.push(Event{time, handle, std::move(payload)});
    return handle;
  }

  void invalidate(Handle handle) { alive_.at(handle) = 0; }

  // Pops the earliest valid event and advances the clock to its time.
  // Invalidated events are discarded in passing. Returns nullopt once no
  // valid event remains.
  std::optional<Event> next() {
    while (!heap_.empty()) {
      Event event = heap_.top();
      heap_.pop();
      if (!alive_[event.seq]) continue;
      clock_ = event.time;
      return event;
    }
    return std::nullopt;
  }

  Time clock() const { return clock_; }
  std::uint64_t scheduled_count() const { return next_seq_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::vector<std::uint8_t> alive_;
  std::uint64_t next_seq_ = 0;
  Time clock_ = 0;
};

}  // namespace wsim
