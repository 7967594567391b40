#include "wsim/results_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "wsim/metrics.hpp"

namespace wsim {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

auto row_key(const ResultRow& row) {
  return std::tuple(row.total_work, row.num_procs, row.latency, static_cast<int>(row.policy),
                    static_cast<int>(row.threshold_enabled), row.seed);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::uint64_t field_u64(std::string_view field, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw std::runtime_error("results row " + std::to_string(line_no) + ": bad integer '" +
                             std::string(field) + "'");
  return value;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

nlohmann::ordered_json row_json(const ResultRow& row) {
  nlohmann::ordered_json j;
  j["W"] = row.total_work;
  j["p"] = row.num_procs;
  j["lambda"] = row.latency;
  j["policy"] = to_string(row.policy);
  j["threshold"] = row.threshold_enabled ? 1 : 0;
  j["seed"] = row.seed;
  j["makespan"] = row.makespan;
  j["requests_total"] = row.requests_total;
  j["requests_granted"] = row.requests_granted;
  j["requests_failed"] = row.requests_failed;
  j["startup_end"] = row.startup_end;
  j["shutdown_start"] = row.shutdown_start;
  return j;
}

}  // namespace

ResultRow to_row(const SimResult& result) {
  ResultRow row;
  row.total_work = result.config.total_work;
  row.num_procs = result.config.num_procs;
  row.latency = result.config.latency;
  row.policy = result.config.policy;
  row.threshold_enabled = result.config.threshold_enabled;
  row.seed = result.config.seed;
  row.makespan = result.makespan;
  row.requests_total = result.requests_total;
  row.requests_granted = result.requests_granted;
  row.requests_failed = result.requests_failed;
  row.startup_end = result.startup_end;
  row.shutdown_start = result.shutdown_start;
  return row;
}

void write_results(std::span<const ResultRow> rows, std::ostream& out) {
  if (rows.empty()) throw std::invalid_argument("write_results: no results to write");
  std::vector<ResultRow> sorted(rows.begin(), rows.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ResultRow& a, const ResultRow& b) { return row_key(a) < row_key(b); });
  out << kResultsHeader << '\n';
  for (const auto& row : sorted) {
    out << row.total_work << ',' << row.num_procs << ',' << row.latency << ','
        << to_string(row.policy) << ',' << (row.threshold_enabled ? 1 : 0) << ',' << row.seed
        << ',' << row.makespan << ',' << row.requests_total << ',' << row.requests_granted << ','
        << row.requests_failed << ',' << row.startup_end << ',' << row.shutdown_start << '\n';
  }
}

void write_results(std::span<const SimResult> results, const std::string& path) {
  if (results.empty()) throw std::invalid_argument("write_results: no results to write");
  std::vector<ResultRow> rows;
  rows.reserve(results.size());
  for (const auto& result : results) rows.push_back(to_row(result));
  auto out = open_out(path);
  write_results(rows, out);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<ResultRow> read_results(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("results file: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader)
    throw std::runtime_error("results file: unexpected header '" + line + "'");
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 12)
      throw std::runtime_error("results row " + std::to_string(line_no) + ": expected 12 fields");
    ResultRow row;
    row.total_work = field_u64(fields[0], line_no);
    row.num_procs = static_cast<std::uint32_t>(field_u64(fields[1], line_no));
    row.latency = field_u64(fields[2], line_no);
    const auto policy = parse_policy(fields[3]);
    if (!policy)
      throw std::runtime_error("results row " + std::to_string(line_no) + ": bad policy '" +
                               std::string(fields[3]) + "'");
    row.policy = *policy;
    const std::uint64_t threshold = field_u64(fields[4], line_no);
    if (threshold > 1)
      throw std::runtime_error("results row " + std::to_string(line_no) + ": bad threshold flag");
    row.threshold_enabled = threshold == 1;
    row.seed = field_u64(fields[5], line_no);
    row.makespan = field_u64(fields[6], line_no);
    row.requests_total = field_u64(fields[7], line_no);
    row.requests_granted = field_u64(fields[8], line_no);
    row.requests_failed = field_u64(fields[9], line_no);
    row.startup_end = field_u64(fields[10], line_no);
    row.shutdown_start = field_u64(fields[11], line_no);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ResultRow> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_results(in);
}

void write_results_json(std::span<const SimResult> results, const std::string& path) {
  if (results.empty()) throw std::invalid_argument("write_results_json: no results to write");
  std::vector<ResultRow> rows;
  rows.reserve(results.size());
  for (const auto& result : results) rows.push_back(to_row(result));
  std::sort(rows.begin(), rows.end(),
            [](const ResultRow& a, const ResultRow& b) { return row_key(a) < row_key(b); });
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& row : rows) doc.push_back(row_json(row));
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string to_json(const SimResult& result) {
  nlohmann::ordered_json j = row_json(to_row(result));
  j["threshold_value"] = result.config.effective_threshold();
  j["busy_time"] = result.busy_time;
  j["idle_time"] = result.idle_time;
  if (!result.config.snapshot_times.empty()) {
    j["snapshot_times"] = result.config.snapshot_times;
    j["snapshots"] = result.snapshots;
  }
  return j.dump(2);
}

void write_summary(std::span<const SimResult> results, std::ostream& out) {
  if (results.empty()) throw std::invalid_argument("write_summary: no results to summarize");
  out << "W,p,lambda,policy,threshold,n,makespan_mean,makespan_stddev,makespan_min,"
         "makespan_q1,makespan_median,makespan_q3,makespan_max,requests_total_mean,"
         "startup_end_mean\n";
  const auto same_config = [](const SimResult& a, const SimResult& b) {
    return a.config.total_work == b.config.total_work &&
           a.config.num_procs == b.config.num_procs && a.config.latency == b.config.latency &&
           a.config.policy == b.config.policy &&
           a.config.threshold_enabled == b.config.threshold_enabled;
  };
  std::size_t begin = 0;
  while (begin < results.size()) {
    std::size_t end = begin + 1;
    while (end < results.size() && same_config(results[begin], results[end])) ++end;
    std::vector<double> makespans;
    makespans.reserve(end - begin);
    double requests_sum = 0;
    double startup_sum = 0;
    for (std::size_t i = begin; i < end; ++i) {
      makespans.push_back(static_cast<double>(results[i].makespan));
      requests_sum += static_cast<double>(results[i].requests_total);
      startup_sum += static_cast<double>(results[i].startup_end);
    }
    const auto stats = summarize(makespans);
    const auto& config = results[begin].config;
    const double n = static_cast<double>(stats.n);
    out << config.total_work << ',' << config.num_procs << ',' << config.latency << ','
        << to_string(config.policy) << ',' << (config.threshold_enabled ? 1 : 0) << ',' << stats.n
        << ',' << format_double(stats.mean) << ',' << format_double(stats.stddev) << ','
        << format_double(stats.min) << ',' << format_double(stats.q1) << ','
        << format_double(stats.median) << ',' << format_double(stats.q3) << ','
        << format_double(stats.max) << ',' << format_double(requests_sum / n) << ','
        << format_double(startup_sum / n) << '\n';
    begin = end;
  }
}

void write_summary(std::span<const SimResult> results, const std::string& path) {
  auto out = open_out(path);
  write_summary(results, out);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<VictimScriptEntry> parse_victim_script(std::istream& in) {
  std::vector<VictimScriptEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::uint64_t thief = 0;
    std::uint64_t victim = 0;
    if (!(fields >> thief)) continue;  // blank or comment-only line
    if (!(fields >> victim))
      throw std::runtime_error("victim script line " + std::to_string(line_no) +
                               ": expected 'thief victim'");
    std::string extra;
    if (fields >> extra)
      throw std::runtime_error("victim script line " + std::to_string(line_no) +
                               ": trailing tokens");
    entries.push_back({static_cast<ProcId>(thief), static_cast<ProcId>(victim)});
  }
  return entries;
}

std::vector<VictimScriptEntry> load_victim_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open victim script '" + path + "'");
  return parse_victim_script(in);
}

}  // namespace wsim
