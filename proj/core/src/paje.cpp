#include "wsim/paje.hpp"

#include <deque>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace wsim {

namespace {

constexpr const char* kHeader =
    "%EventDef PajeDefineContainerType 1\n"
    "%  Alias string\n"
    "%  ContainerType string\n"
    "%  Name string\n"
    "%EndEventDef\n"
    "%EventDef PajeDefineStateType 2\n"
    "%  Alias string\n"
    "%  ContainerType string\n"
    "%  Name string\n"
    "%EndEventDef\n"
    "%EventDef PajeDefineEntityValue 3\n"
    "%  Alias string\n"
    "%  EntityType string\n"
    "%  Name string\n"
    "%EndEventDef\n"
    "%EventDef PajeDefineLinkType 4\n"
    "%  Alias string\n"
    "%  ContainerType string\n"
    "%  SourceContainerType string\n"
    "%  DestContainerType string\n"
    "%  Name string\n"
    "%EndEventDef\n"
    "%EventDef PajeCreateContainer 5\n"
    "%  Time date\n"
    "%  Alias string\n"
    "%  Type string\n"
    "%  Container string\n"
    "%  Name string\n"
    "%EndEventDef\n"
    "%EventDef PajeSetState 6\n"
    "%  Time date\n"
    "%  Type string\n"
    "%  Container string\n"
    "%  Value string\n"
    "%EndEventDef\n"
    "%EventDef PajeStartLink 7\n"
    "%  Time date\n"
    "%  Type string\n"
    "%  Container string\n"
    "%  SourceContainer string\n"
    "%  Value string\n"
    "%  Key string\n"
    "%EndEventDef\n"
    "%EventDef PajeEndLink 8\n"
    "%  Time date\n"
    "%  Type string\n"
    "%  Container string\n"
    "%  DestContainer string\n"
    "%  Value string\n"
    "%  Key string\n"
    "%EndEventDef\n";

const char* state_alias(Activity activity) {
  switch (activity) {
    case Activity::Working:
      return "SW";
    case Activity::Idle:
      return "SI";
    case Activity::Transferring:
      return "ST";
  }
  return "SI";
}

const char* link_alias(LinkKind kind) {
  switch (kind) {
    case LinkKind::Request:
      return "LREQ";
    case LinkKind::Grant:
      return "LGRA";
    case LinkKind::Fail:
      return "LFAI";
  }
  return "LREQ";
}

const char* link_value(LinkKind kind) {
  switch (kind) {
    case LinkKind::Request:
      return "\"request\"";
    case LinkKind::Grant:
      return "\"grant\"";
    case LinkKind::Fail:
      return "\"fail\"";
  }
  return "\"request\"";
}

std::string container(ProcId proc) { return "cp" + std::to_string(proc); }

// Signature used to pair StartLink/EndLink records: (sender, receiver,
// payload encoding). Equal messages in flight pair FIFO, which is exact
// because every message takes the same latency.
using LinkSignature = std::tuple<ProcId, ProcId, std::int64_t>;

std::int64_t amount_code(const TraceRecord& record) {
  if (!record.work_amount) return -1;
  return static_cast<std::int64_t>(*record.work_amount);
}

}  // namespace

void export_paje(const EventTrace& trace, std::ostream& out) {
  // Pair every send with its receive first; the keys make the link events.
  std::map<LinkSignature, std::deque<std::size_t>> pending;
  std::vector<std::size_t> pair_key(trace.records.size(), 0);
  std::size_t next_key = 0;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& record = trace.records[i];
    if (record.kind == TraceKind::MessageSend) {
      pair_key[i] = next_key++;
      pending[{record.proc, *record.peer, amount_code(record)}].push_back(pair_key[i]);
    } else if (record.kind == TraceKind::MessageRecv) {
      const LinkSignature signature{*record.peer, record.proc, amount_code(record)};
      const auto it = pending.find(signature);
      if (it == pending.end() || it->second.empty())
        throw std::invalid_argument("paje export: receive without a matching send");
      pair_key[i] = it->second.front();
      it->second.pop_front();
      if (it->second.empty()) pending.erase(it);
    }
  }
  if (!pending.empty())
    throw std::invalid_argument("paje export: send without a matching receive");

  out << kHeader;
  out << "1 CP 0 \"Platform\"\n";
  out << "1 CPROC CP \"Processor\"\n";
  out << "2 SA CPROC \"Activity\"\n";
  out << "3 SW SA \"Working\"\n";
  out << "3 SI SA \"Idle\"\n";
  out << "3 ST SA \"Transferring\"\n";
  out << "4 LREQ CP CPROC CPROC \"StealRequest\"\n";
  out << "4 LGRA CP CPROC CPROC \"WorkGrant\"\n";
  out << "4 LFAI CP CPROC CPROC \"StealFail\"\n";
  out << "5 0 cplat CP 0 \"platform\"\n";
  for (ProcId proc = 0; proc < trace.num_procs; ++proc)
    out << "5 0 " << container(proc) << " CPROC cplat \"P" << proc << "\"\n";
  for (ProcId proc = 0; proc < trace.num_procs; ++proc)
    out << "6 0 SA " << container(proc) << " SI\n";

  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& record = trace.records[i];
    switch (record.kind) {
      case TraceKind::StateChange:
        out << "6 " << record.time << " SA " << container(record.proc) << ' '
            << state_alias(*record.state) << '\n';
        break;
      case TraceKind::MessageSend:
        out << "7 " << record.time << ' ' << link_alias(link_kind(record)) << " cplat "
            << container(record.proc) << ' ' << link_value(link_kind(record)) << " k"
            << pair_key[i] << '\n';
        break;
      case TraceKind::MessageRecv:
        out << "8 " << record.time << ' ' << link_alias(link_kind(record)) << " cplat "
            << container(record.proc) << ' ' << link_value(link_kind(record)) << " k"
            << pair_key[i] << '\n';
        break;
    }
  }
}

void export_paje(const EventTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  export_paje(trace, out);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace wsim
