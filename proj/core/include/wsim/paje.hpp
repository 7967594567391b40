#pragma once

#include <iosfwd>
#include <string>

#include "wsim/trace.hpp"

namespace wsim {

// Writes a self-defining Paje 1.x document: a platform container holding one
// container per processor, a Working/Idle/Transferring state lane, and one
// StartLink/EndLink pair per message (separate link types for steal
// requests, grants and fails). Timestamps are decimal integers. Throws when
// the trace contains unpaired message records.
void export_paje(const EventTrace& trace, std::ostream& out);
void export_paje(const EventTrace& trace, const std::string& path);

}  // namespace wsim
