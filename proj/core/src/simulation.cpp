#include "wsim/simulation.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

#include "wsim/event_queue.hpp"

namespace wsim {

std::optional<WorkSplit> steal_decision(WorkAmount victim_work, Time now, Policy policy,
                                        bool threshold_enabled, WorkAmount threshold_value,
                                        Time transfer_busy_until) {
  if (victim_work < 2) return std::nullopt;  // nothing transferable
  if (threshold_enabled && victim_work < threshold_value) return std::nullopt;
  if (policy == Policy::SWT && transfer_busy_until > now) return std::nullopt;
  return split_work(victim_work);
}

VictimSelector::VictimSelector(std::uint64_t seed, std::uint32_t num_procs,
                               std::span<const VictimScriptEntry> script)
    : rng_(seed), num_procs_(num_procs), scripted_(num_procs) {
  for (const auto& entry : script) scripted_.at(entry.thief).push_back(entry.victim);
}

ProcId VictimSelector::choose(ProcId thief) {
  if (num_procs_ < 2)
    throw std::logic_error("choose_victim: no victim exists with a single processor");
  auto& pending = scripted_[thief];
  if (!pending.empty()) {
    const ProcId victim = pending.front();
    pending.pop_front();
    return victim;
  }
  const auto draw = static_cast<ProcId>(rng_.below(num_procs_ - 1));
  return draw >= thief ? draw + 1 : draw;
}

namespace {

struct EvRequestArrival {
  ProcId thief = 0;
  ProcId victim = 0;
};
struct EvResponseArrival {
  Message msg;
};
struct EvCompletion {
  ProcId proc = 0;
};
using SimEvent = std::variant<EvRequestArrival, EvResponseArrival, EvCompletion>;
using Queue = EventQueue<SimEvent>;

struct Proc {
  bool busy = false;
  Time busy_until = 0;   // pending completion instant while busy
  Time stint_start = 0;  // start of the current uninterrupted busy stretch
  Queue::Handle completion = 0;
  bool request_outstanding = false;
  Time transfer_busy_until = 0;  // SWT channel occupancy end
  bool ever_active = false;
  std::uint64_t busy_total = 0;
};

class Simulation {
 public:
  explicit Simulation(const SimConfig& config)
      : cfg_(config),
        selector_(config.seed, config.num_procs, config.victim_script),
        procs_(config.num_procs),
        half_busy_((config.num_procs + 1) / 2),
        snapshots_(config.snapshot_times) {
    out_.result.config = cfg_;
    out_.trace.num_procs = cfg_.num_procs;
    out_.trace.latency = cfg_.latency;
  }

  RunOutput run() {
    start_work(0, cfg_.total_work, 0);
    for (ProcId thief = 1; thief < cfg_.num_procs; ++thief) send_request(thief, 0);

    while (auto event = queue_.next()) {
      take_snapshots_before(event->time);
      std::visit([&](const auto& e) { handle(e, event->time); }, event->payload);
      if (cfg_.check_invariants) check_conservation(event->time);
    }
    take_snapshots_before(std::numeric_limits<Time>::max());
    finalize();
    return std::move(out_);
  }

 private:
  void handle(const EvRequestArrival& e, Time t) {
    Proc& victim = procs_[e.victim];
    record_msg(TraceKind::MessageRecv, t, e.victim, e.thief, std::nullopt);
    const WorkAmount work = victim.busy ? victim.busy_until - t : 0;
    const auto split = steal_decision(work, t, cfg_.policy, cfg_.threshold_enabled,
                                      cfg_.effective_threshold(), victim.transfer_busy_until);
    if (split) {
      // The victim kept computing during the request flight: close the
      // executed part of its stint and keep the larger half of the residue.
      close_stint(victim, t);
      victim.stint_start = t;
      victim.busy_until = t + split->kept;
      committed_ += split->kept;
      queue_.invalidate(victim.completion);
      victim.completion = queue_.schedule(victim.busy_until, EvCompletion{e.victim});
      if (cfg_.policy == Policy::SWT) victim.transfer_busy_until = t + cfg_.latency;
      ++out_.result.requests_granted;
      ++inflight_grants_;
      inflight_work_ += split->sent;
      send_response(Message{Message::Kind::GrantResponse, e.victim, e.thief, split->sent, t,
                            t + cfg_.latency});
    } else {
      ++out_.result.requests_failed;
      send_response(
          Message{Message::Kind::FailResponse, e.victim, e.thief, 0, t, t + cfg_.latency});
    }
  }

  void handle(const EvResponseArrival& e, Time t) {
    const Message& msg = e.msg;
    Proc& thief = procs_[msg.to];
    if (!thief.request_outstanding)
      throw std::logic_error("work stealing: response for a thief with no outstanding request");
    thief.request_outstanding = false;
    if (msg.kind == Message::Kind::GrantResponse) {
      if (msg.work_amount == 0) throw std::logic_error("work stealing: grant carrying zero work");
      record_msg(TraceKind::MessageRecv, t, msg.to, msg.from, msg.work_amount);
      --inflight_grants_;
      inflight_work_ -= msg.work_amount;
      start_work(msg.to, msg.work_amount, t);
    } else {
      record_msg(TraceKind::MessageRecv, t, msg.to, msg.from, WorkAmount{0});
      // Steal again right away unless the whole load is already placed.
      if (!finished()) send_request(msg.to, t);
    }
  }

  void handle(const EvCompletion& e, Time t) {
    Proc& proc = procs_[e.proc];
    assert(proc.busy && proc.busy_until == t);
    close_stint(proc, t);
    proc.busy = false;
    makespan_ = std::max(makespan_, t);
    drop_busy_count(t);
    record_state(t, e.proc, Activity::Idle);
    if (cfg_.num_procs >= 2 && !finished()) send_request(e.proc, t);
  }

  void send_request(ProcId thief, Time t) {
    Proc& proc = procs_[thief];
    if (proc.request_outstanding)
      throw std::logic_error("work stealing: thief already has an outstanding request");
    assert(!proc.busy);
    const ProcId victim = selector_.choose(thief);
    proc.request_outstanding = true;
    ++out_.result.requests_total;
    record_msg(TraceKind::MessageSend, t, thief, victim, std::nullopt);
    queue_.schedule(t + cfg_.latency, EvRequestArrival{thief, victim});
  }

  void send_response(const Message& msg) {
    record_msg(TraceKind::MessageSend, msg.send_time, msg.from, msg.to,
               msg.kind == Message::Kind::GrantResponse ? msg.work_amount : WorkAmount{0});
    queue_.schedule(msg.arrival_time, EvResponseArrival{msg});
  }

  void start_work(ProcId id, WorkAmount amount, Time t) {
    Proc& proc = procs_[id];
    assert(!proc.busy && amount >= 1);
    proc.busy = true;
    proc.stint_start = t;
    proc.busy_until = t + amount;
    committed_ += amount;
    proc.completion = queue_.schedule(proc.busy_until, EvCompletion{id});
    raise_busy_count();
    if (!proc.ever_active) {
      proc.ever_active = true;
      if (++active_procs_ == cfg_.num_procs) all_active_at_ = t;
    }
    record_state(t, id, Activity::Working);
  }

  // Accounts the executed part of a busy stint and removes its span from the
  // committed-work tally. The caller restarts or ends the stint.
  void close_stint(Proc& proc, Time t) {
    const std::uint64_t executed = t - proc.stint_start;
    proc.busy_total += executed;
    executed_ += executed;
    committed_ -= proc.busy_until - proc.stint_start;
  }

  void raise_busy_count() {
    const bool was_below = busy_count_ < half_busy_;
    ++busy_count_;
    if (was_below && busy_count_ >= half_busy_) last_half_drop_.reset();
  }

  void drop_busy_count(Time t) {
    const bool was_at_half = busy_count_ >= half_busy_;
    --busy_count_;
    if (was_at_half && busy_count_ < half_busy_) last_half_drop_ = t;
  }

  // Global placement test: no processor holds work and no grant is in
  // flight. In-flight fail responses do not count; they drain without side
  // effects once this holds.
  bool finished() const { return busy_count_ == 0 && inflight_grants_ == 0; }

  void take_snapshots_before(Time horizon) {
    while (snapshot_cursor_ < snapshots_.size() && snapshots_[snapshot_cursor_] < horizon) {
      const Time at = snapshots_[snapshot_cursor_++];
      std::vector<WorkAmount>& row = out_.result.snapshots.emplace_back();
      row.reserve(procs_.size());
      for (const Proc& proc : procs_) row.push_back(proc.busy ? proc.busy_until - at : 0);
    }
  }

  void check_conservation(Time t) const {
    if (committed_ + inflight_work_ + executed_ != cfg_.total_work)
      throw std::logic_error("work stealing: conservation violated at t=" + std::to_string(t));
  }

  void finalize() {
    SimResult& r = out_.result;
    r.makespan = makespan_;
    r.busy_time.reserve(procs_.size());
    r.idle_time.reserve(procs_.size());
    std::uint64_t busy_sum = 0;
    for (const Proc& proc : procs_) {
      r.busy_time.push_back(proc.busy_total);
      r.idle_time.push_back(makespan_ - proc.busy_total);
      busy_sum += proc.busy_total;
    }
    if (busy_sum != cfg_.total_work)
      throw std::logic_error("work stealing: executed work does not sum to the total load");
    if (r.requests_total != r.requests_granted + r.requests_failed)
      throw std::logic_error("work stealing: undecided steal requests at end of run");
    r.startup_end = active_procs_ == cfg_.num_procs ? all_active_at_ : makespan_;
    r.shutdown_start = std::max(r.startup_end, last_half_drop_.value_or(r.startup_end));
  }

  void record_state(Time t, ProcId proc, Activity activity) {
    if (!cfg_.record_trace) return;
    out_.trace.records.push_back(
        {t, TraceKind::StateChange, proc, std::nullopt, activity, std::nullopt});
  }

  void record_msg(TraceKind kind, Time t, ProcId proc, ProcId peer,
                  std::optional<WorkAmount> amount) {
    if (!cfg_.record_trace) return;
    out_.trace.records.push_back({t, kind, proc, peer, std::nullopt, amount});
  }

  SimConfig cfg_;
  VictimSelector selector_;
  Queue queue_;
  std::vector<Proc> procs_;
  RunOutput out_;

  std::uint32_t half_busy_;
  std::uint32_t busy_count_ = 0;
  std::uint32_t active_procs_ = 0;
  Time all_active_at_ = 0;
  std::optional<Time> last_half_drop_;
  Time makespan_ = 0;

  std::uint64_t inflight_grants_ = 0;

  // Conservation ledger: committed_ is the span of every open stint,
  // inflight_work_ the payload of grants not yet delivered, executed_ the
  // work already accounted to busy_total.
  std::uint64_t committed_ = 0;
  std::uint64_t inflight_work_ = 0;
  std::uint64_t executed_ = 0;

  std::vector<Time> snapshots_;
  std::size_t snapshot_cursor_ = 0;
};

}  // namespace

RunOutput run_simulation(const SimConfig& config) {
  config.validate();
  Simulation simulation(config);
  return simulation.run();
}

}  // namespace wsim
