#include "wsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace wsim {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
  throw std::invalid_argument("sweep config line " + std::to_string(line) + ": " + message);
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  return text;
}

std::uint64_t parse_u64(std::string_view token, int line, const char* what) {
  token = trim(token);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    fail(line, std::string("expected an integer for ") + what + ", got '" + std::string(token) +
                   "'");
  return value;
}

// Comma-separated integers; each item is a plain value or a lo:hi:mult
// geometric range.
std::vector<std::uint64_t> parse_int_list(std::string_view value, int line, const char* key) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    const std::string_view item =
        trim(value.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (item.empty()) fail(line, std::string("empty item in ") + key + " list");
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      out.push_back(parse_u64(item, line, key));
    } else {
      const std::size_t colon2 = item.find(':', colon + 1);
      if (colon2 == std::string_view::npos || item.find(':', colon2 + 1) != std::string_view::npos)
        fail(line, std::string("range for ") + key + " must be lo:hi:mult");
      const std::uint64_t lo = parse_u64(item.substr(0, colon), line, key);
      const std::uint64_t hi = parse_u64(item.substr(colon + 1, colon2 - colon - 1), line, key);
      const std::uint64_t mult = parse_u64(item.substr(colon2 + 1), line, key);
      if (mult < 2) fail(line, std::string("range multiplier for ") + key + " must be at least 2");
      if (lo < 1) fail(line, std::string("range start for ") + key + " must be at least 1");
      if (lo > hi) fail(line, std::string("empty range for ") + key);
      for (std::uint64_t v = lo;;) {
        out.push_back(v);
        if (v > hi / mult) break;
        v *= mult;
        if (v > hi) break;
      }
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) fail(line, std::string("empty ") + key + " list");
  return out;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::size_t SweepSpec::config_count() const {
  return work_values.size() * proc_values.size() * latency_values.size() * policies.size() *
         thresholds.size();
}

void SweepSpec::validate() const {
  if (work_values.empty()) throw std::invalid_argument("sweep: no W values");
  if (proc_values.empty()) throw std::invalid_argument("sweep: no p values");
  if (latency_values.empty()) throw std::invalid_argument("sweep: no lambda values");
  if (policies.empty()) throw std::invalid_argument("sweep: no policies");
  if (thresholds.empty()) throw std::invalid_argument("sweep: no threshold settings");
  if (replications < 1) throw std::invalid_argument("sweep: replications must be at least 1");
  for (const auto w : work_values)
    if (w < 1) throw std::invalid_argument("sweep: W must be at least 1");
  for (const auto p : proc_values)
    if (p < 1) throw std::invalid_argument("sweep: p must be at least 1");
  for (const auto l : latency_values)
    if (l < 1) throw std::invalid_argument("sweep: lambda must be at least 1");
}

SweepSpec parse_sweep(std::string_view text) {
  SweepSpec spec;
  spec.policies.clear();
  spec.thresholds.clear();
  bool saw_w = false, saw_p = false, saw_lambda = false, saw_policy = false,
       saw_threshold = false, saw_reps = false, saw_seed = false, saw_output = false,
       saw_summary = false;

  int line_no = 0;
  for (std::string_view raw_line : split(text, '\n')) {
    ++line_no;
    const std::size_t hash = raw_line.find('#');
    if (hash != std::string_view::npos) raw_line = raw_line.substr(0, hash);
    for (std::string_view statement : split(raw_line, ';')) {
      statement = trim(statement);
      if (statement.empty()) continue;
      const std::size_t eq = statement.find('=');
      if (eq == std::string_view::npos) fail(line_no, "expected key=value");
      const std::string_view key = trim(statement.substr(0, eq));
      const std::string_view value = trim(statement.substr(eq + 1));

      const auto once = [&](bool& seen) {
        if (seen) fail(line_no, "duplicate key '" + std::string(key) + "'");
        seen = true;
      };

      if (key == "W") {
        once(saw_w);
        for (const auto v : parse_int_list(value, line_no, "W")) {
          if (v < 1) fail(line_no, "W must be at least 1");
          spec.work_values.push_back(v);
        }
      } else if (key == "p") {
        once(saw_p);
        for (const auto v : parse_int_list(value, line_no, "p")) {
          if (v < 1) fail(line_no, "p must be at least 1");
          if (v > std::numeric_limits<std::uint32_t>::max()) fail(line_no, "p is out of range");
          spec.proc_values.push_back(static_cast<std::uint32_t>(v));
        }
      } else if (key == "lambda") {
        once(saw_lambda);
        for (const auto v : parse_int_list(value, line_no, "lambda")) {
          if (v < 1) fail(line_no, "lambda must be at least 1");
          spec.latency_values.push_back(v);
        }
      } else if (key == "policy") {
        once(saw_policy);
        for (const auto item : split(value, ',')) {
          const auto policy = parse_policy(trim(item));
          if (!policy) fail(line_no, "policy must be swt or mwt");
          if (std::find(spec.policies.begin(), spec.policies.end(), *policy) !=
              spec.policies.end())
            fail(line_no, "policy listed twice");
          spec.policies.push_back(*policy);
        }
      } else if (key == "threshold") {
        once(saw_threshold);
        for (const auto item : split(value, ',')) {
          const std::string_view token = trim(item);
          bool enabled = false;
          if (token == "on")
            enabled = true;
          else if (token == "off")
            enabled = false;
          else
            fail(line_no, "threshold must be on or off");
          if (std::find(spec.thresholds.begin(), spec.thresholds.end(), enabled) !=
              spec.thresholds.end())
            fail(line_no, "threshold setting listed twice");
          spec.thresholds.push_back(enabled);
        }
      } else if (key == "replications") {
        once(saw_reps);
        spec.replications = parse_u64(value, line_no, "replications");
        if (spec.replications < 1) fail(line_no, "replications must be at least 1");
      } else if (key == "base_seed") {
        once(saw_seed);
        spec.base_seed = parse_u64(value, line_no, "base_seed");
      } else if (key == "output") {
        once(saw_output);
        spec.output_path = std::string(value);
      } else if (key == "summary_output") {
        once(saw_summary);
        spec.summary_output_path = std::string(value);
      } else {
        fail(line_no, "unknown key '" + std::string(key) + "'");
      }
    }
  }

  if (!saw_w) throw std::invalid_argument("sweep config: missing required key W");
  if (!saw_p) throw std::invalid_argument("sweep config: missing required key p");
  if (!saw_lambda) throw std::invalid_argument("sweep config: missing required key lambda");
  if (!saw_policy) spec.policies = {Policy::MWT};
  if (!saw_threshold) spec.thresholds = {true};
  spec.validate();
  return spec;
}

std::vector<SimConfig> enumerate_configs(const SweepSpec& spec) {
  spec.validate();
  std::vector<SimConfig> configs;
  configs.reserve(spec.config_count());
  for (const auto work : spec.work_values)
    for (const auto procs : spec.proc_values)
      for (const auto latency : spec.latency_values)
        for (const auto policy : spec.policies)
          for (const bool threshold : spec.thresholds) {
            SimConfig config;
            config.total_work = work;
            config.num_procs = procs;
            config.latency = latency;
            config.policy = policy;
            config.threshold_enabled = threshold;
            config.record_trace = false;
            configs.push_back(std::move(config));
          }
  return configs;
}

std::vector<SimResult> run_configs(std::span<const SimConfig> configs, unsigned threads) {
  const std::size_t total = configs.size();
  std::vector<SimResult> results(total);
  if (total == 0) return results;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));

  std::atomic<std::size_t> cursor{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
      if (i >= total) return;
      try {
        results[i] = run_simulation(configs[i]).result;
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

std::vector<SimResult> run_sweep(const SweepSpec& spec, unsigned threads) {
  const auto grid = enumerate_configs(spec);
  const std::uint64_t reps = spec.replications;
  std::vector<SimConfig> runs;
  runs.reserve(grid.size() * reps);
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (std::uint64_t r = 0; r < reps; ++r) {
      SimConfig config = grid[k];
      config.seed = spec.base_seed + k * reps + r;
      runs.push_back(std::move(config));
    }
  return run_configs(runs, threads);
}

}  // namespace wsim
