#include "wsim/config.hpp"

#include <algorithm>
#include <stdexcept>

namespace wsim {

const char* to_string(Policy policy) {
  return policy == Policy::SWT ? "SWT" : "MWT";
}

std::optional<Policy> parse_policy(std::string_view text) {
  if (text == "SWT" || text == "swt") return Policy::SWT;
  if (text == "MWT" || text == "mwt") return Policy::MWT;
  return std::nullopt;
}

void SimConfig::validate() const {
  if (total_work < 1) throw std::invalid_argument("config: total work must be at least 1");
  if (num_procs < 1) throw std::invalid_argument("config: processor count must be at least 1");
  if (latency < 1) throw std::invalid_argument("config: latency must be at least 1");
  for (const auto& entry : victim_script) {
    if (entry.thief >= num_procs || entry.victim >= num_procs)
      throw std::invalid_argument("config: victim script names a processor out of range");
    if (entry.thief == entry.victim)
      throw std::invalid_argument("config: scripted victim equals its thief");
  }
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw std::invalid_argument("config: snapshot times must be ascending");
}

}  // namespace wsim
