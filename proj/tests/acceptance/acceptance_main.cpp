// Acceptance suite: one pass/fail line per criterion. Runs everything by
// default; pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "wsim/metrics.hpp"
#include "wsim/model.hpp"
#include "wsim/rng.hpp"
#include "wsim/simulation.hpp"
#include "wsim/sweep.hpp"

using namespace wsim;

namespace {

using Clock = std::chrono::steady_clock;

double mean_of(const std::vector<double>& values) {
  double sum = 0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

SimConfig base_config(WorkAmount work, std::uint32_t procs, Time latency,
                      Policy policy = Policy::MWT, bool threshold = true) {
  SimConfig config;
  config.total_work = work;
  config.num_procs = procs;
  config.latency = latency;
  config.policy = policy;
  config.threshold_enabled = threshold;
  config.record_trace = false;
  return config;
}

std::vector<SimResult> replicate(const SimConfig& base, std::uint64_t replications,
                                 std::uint64_t base_seed) {
  std::vector<SimConfig> configs(replications, base);
  for (std::uint64_t r = 0; r < replications; ++r) configs[r].seed = base_seed + r;
  return run_configs(configs);
}

std::vector<double> makespans_of(const std::vector<SimResult>& results) {
  std::vector<double> values;
  values.reserve(results.size());
  for (const auto& result : results) values.push_back(static_cast<double>(result.makespan));
  return values;
}

// ---------------------------------------------------------------- criterion 1

bool criterion_golden_trace(std::string& detail) {
  SimConfig config;
  config.total_work = 100;
  config.num_procs = 3;
  config.latency = 5;
  config.policy = Policy::MWT;
  config.threshold_enabled = false;
  config.seed = 0;
  config.victim_script = {{1, 0}, {2, 1}, {2, 0}};
  config.snapshot_times = {5, 10, 20};

  const auto start = Clock::now();
  const auto output = run_simulation(config);
  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  const auto& result = output.result;
  const bool snapshots_ok = result.snapshots.size() == 3 &&
                            result.snapshots[0] == std::vector<WorkAmount>{48, 0, 0} &&
                            result.snapshots[1] == std::vector<WorkAmount>{43, 47, 0} &&
                            result.snapshots[2] == std::vector<WorkAmount>{14, 37, 19};
  const bool startup_ok = result.startup_end == 20 && detect_startup_end(output.trace) == 20;
  const bool fast_enough = elapsed_ms < 1.0;

  std::ostringstream out;
  out << "snapshots " << (snapshots_ok ? "exact" : "WRONG") << ", startup_end "
      << result.startup_end << ", " << elapsed_ms << " ms";
  detail = out.str();
  return snapshots_ok && startup_ok && fast_enough;
}

// ---------------------------------------------------------------- criterion 2

bool criterion_threshold_pathology(std::string& detail) {
  SimConfig config = base_config(150, 2, 100, Policy::MWT, false);
  const auto without = run_simulation(config).result;
  config.threshold_enabled = true;
  const auto with = run_simulation(config).result;
  detail = "makespan " + std::to_string(without.makespan) + " without threshold, " +
           std::to_string(with.makespan) + " with";
  return without.makespan == 225 && with.makespan == 150;
}

// ---------------------------------------------------------------- criterion 3

bool criterion_conservation_determinism(std::string& detail) {
  const auto start = Clock::now();
  constexpr int kRuns = 10000;

  SplitMix64 meta(20260808);
  std::vector<SimConfig> configs;
  configs.reserve(kRuns);
  for (int i = 0; i < kRuns; ++i) {
    SimConfig config;
    config.total_work = 1 + meta.below(100000);
    config.num_procs = static_cast<std::uint32_t>(1 + meta.below(64));
    config.latency = 1 + meta.below(500);
    config.policy = meta.below(2) == 0 ? Policy::SWT : Policy::MWT;
    config.threshold_enabled = meta.below(2) == 0;
    config.seed = meta.next();
    config.record_trace = true;
    config.check_invariants = true;
    configs.push_back(std::move(config));
  }

  std::atomic<int> violations{0};
  const auto check_one = [&](const SimConfig& config) {
    const auto first = run_simulation(config);
    const auto second = run_simulation(config);
    bool ok = first.result == second.result && first.trace == second.trace;

    const auto& result = first.result;
    std::uint64_t executed = 0;
    for (std::size_t i = 0; i < result.busy_time.size(); ++i) {
      executed += result.busy_time[i];
      ok = ok && result.busy_time[i] + result.idle_time[i] == result.makespan;
    }
    ok = ok && executed == config.total_work;
    ok = ok && result.requests_total == result.requests_granted + result.requests_failed;
    ok = ok && result.startup_end <= result.shutdown_start &&
         result.shutdown_start <= result.makespan;
    const Time lower = (config.total_work + config.num_procs - 1) / config.num_procs;
    ok = ok && result.makespan >= lower;

    // Per-processor message discipline: a thief's request sends and response
    // receives alternate, so nobody ever has two outstanding steal requests.
    // Grant messages in the trace must agree with the granted counter.
    std::vector<int> outstanding(config.num_procs, 0);
    std::uint64_t grant_sends = 0;
    for (const auto& record : first.trace.records) {
      if (record.kind == TraceKind::MessageSend && !record.work_amount) {
        outstanding[record.proc] += 1;
        ok = ok && outstanding[record.proc] == 1;
      } else if (record.kind == TraceKind::MessageRecv && record.work_amount) {
        outstanding[record.proc] -= 1;
        ok = ok && outstanding[record.proc] == 0;
      } else if (record.kind == TraceKind::MessageSend &&
                 link_kind(record) == LinkKind::Grant) {
        ++grant_sends;
      }
    }
    ok = ok && grant_sends == result.requests_granted;
    if (!ok) violations.fetch_add(1);
  };

  // Two workers, batched by parity to keep the load even.
  std::thread even([&] {
    for (int i = 0; i < kRuns; i += 2) check_one(configs[i]);
  });
  for (int i = 1; i < kRuns; i += 2) check_one(configs[i]);
  even.join();

  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  detail = std::to_string(kRuns) + " configs replayed twice, " +
           std::to_string(violations.load()) + " violations, " + std::to_string(elapsed) + " s";
  return violations.load() == 0 && elapsed < 120.0;
}

// ---------------------------------------------------------------- criterion 4

bool criterion_threshold_safety(std::string& detail) {
  std::vector<SimConfig> configs;
  for (const std::uint32_t procs : {2u, 8u, 32u})
    for (const Time latency : {Time{2}, Time{50}, Time{500}})
      for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        SimConfig config = base_config(10000, procs, latency, Policy::MWT, true);
        config.seed = seed;
        configs.push_back(std::move(config));
      }
  const auto results = run_configs(configs);
  std::uint64_t violations = 0;
  for (const auto& result : results)
    if (result.makespan > result.config.total_work) ++violations;
  detail = std::to_string(results.size()) + " runs, " + std::to_string(violations) +
           " makespans above W";
  return violations == 0;
}

// ---------------------------------------------------------------- criterion 5

bool criterion_model_accuracy(std::string& detail) {
  const Time latency = 262;
  bool ok = true;
  std::ostringstream out;
  std::uint64_t seed_base = 50000;
  for (const WorkAmount work : {WorkAmount{1000000}, WorkAmount{10000000}}) {
    for (const std::uint32_t procs : {32u, 64u}) {
      if (work / procs < 15625) continue;
      const auto results = replicate(base_config(work, procs, latency), 200, seed_base += 1000);
      std::vector<double> ratios;
      ratios.reserve(results.size());
      const double predicted = predict_makespan(static_cast<double>(work), procs, latency);
      for (const auto& result : results)
        ratios.push_back(static_cast<double>(result.makespan) / predicted);
      const double median = summarize(ratios).median;
      const bool config_ok = std::abs(median - 1.0) <= 0.05;
      ok = ok && config_ok;
      out << "W=" << work << " p=" << procs << " median=" << median << (config_ok ? " " : "! ");
    }
  }
  detail = out.str();
  return ok;
}

// ---------------------------------------------------------------- criterion 6

bool criterion_worst_case_error(std::string& detail) {
  const WorkAmount work = 200000;
  const std::uint32_t procs = 64;
  const Time latency = 482;
  const auto results = replicate(base_config(work, procs, latency), 500, 61000);
  const double mean_makespan = mean_of(makespans_of(results));
  const double predicted = predict_makespan(static_cast<double>(work), procs, latency);
  const double error = std::abs(mean_makespan / predicted - 1.0);
  std::ostringstream out;
  out << "mean makespan " << mean_makespan << ", predicted " << predicted << ", error "
      << error * 100 << "%";
  detail = out.str();
  return error <= 0.13;
}

// ---------------------------------------------------------------- criterion 7

bool criterion_cprime_recovery(std::string& detail) {
  std::vector<FitPoint> points;
  std::uint64_t seed_base = 70000;
  for (const WorkAmount work : {WorkAmount{100000}, WorkAmount{1000000}, WorkAmount{10000000}})
    for (const std::uint32_t procs : {32u, 64u, 128u})
      for (const Time latency : {Time{2}, Time{8}, Time{32}, Time{128}, Time{500}}) {
        if (work <= 2 * latency) continue;
        const auto results =
            replicate(base_config(work, procs, latency), 100, seed_base += 1000);
        points.push_back({static_cast<double>(work), static_cast<double>(procs),
                          static_cast<double>(latency), mean_of(makespans_of(results))});
      }
  const double fitted = fit_cprime(points);

  // Noiseless recovery: data generated by the model itself returns the
  // generating constant almost exactly.
  std::vector<FitPoint> noiseless = points;
  for (auto& point : noiseless)
    point.measured_makespan =
        predict_makespan(point.total_work, point.num_procs, point.latency, 1.8);
  const double recovered = fit_cprime(noiseless);

  std::ostringstream out;
  out << "fitted c'=" << fitted << " over " << points.size() << " configs, noiseless recovery "
      << recovered;
  detail = out.str();
  return fitted >= 1.5 && fitted <= 2.1 && std::abs(recovered - 1.8) <= 1.8e-9;
}

// ---------------------------------------------------------------- criterion 8

bool criterion_limit_latency(std::string& detail) {
  constexpr std::uint64_t kProbeReps = 100;
  std::uint64_t seed_base = 80000;

  const auto mean_makespan_at = [&](WorkAmount work, std::uint32_t procs, Time latency) {
    const auto results =
        replicate(base_config(work, procs, latency), kProbeReps, seed_base += 500);
    return mean_of(makespans_of(results));
  };

  bool all_ok = true;
  std::ostringstream out;
  for (const WorkAmount work : {WorkAmount{100000}, WorkAmount{1000000}, WorkAmount{10000000}}) {
    for (const std::uint32_t procs : {32u, 64u, 128u}) {
      const double bound = 1.1 * static_cast<double>(work) / procs;
      const auto acceptable = [&](Time latency) {
        return mean_makespan_at(work, procs, latency) <= bound;
      };

      // Doubling search for the largest acceptable integer latency.
      Time empirical = 0;
      if (acceptable(1)) {
        Time good = 1;
        Time bad = 0;
        for (Time probe = 2;; probe *= 2) {
          if (probe >= work / 2 || !acceptable(probe)) {
            bad = probe;
            break;
          }
          good = probe;
        }
        while (bad - good > 1) {
          const Time mid = good + (bad - good) / 2;
          (acceptable(mid) ? good : bad) = mid;
        }
        empirical = good;
      }

      const double analytic = limit_latency(static_cast<double>(work), procs);
      const double slope = (static_cast<double>(work) / procs) / analytic;
      const bool close = std::abs(static_cast<double>(empirical) - analytic) <= 0.25 * analytic;
      const bool slope_ok = slope >= 400.0 && slope <= 560.0;
      all_ok = all_ok && close && slope_ok;
      out << "W=" << work << " p=" << procs << " empirical=" << empirical
          << " analytic=" << analytic << (close && slope_ok ? " " : "! ");
    }
  }
  detail = out.str();
  return all_ok;
}

// ---------------------------------------------------------------- criterion 9

bool criterion_steal_count_sublinear(std::string& detail) {
  const WorkAmount work = 1000000;
  const std::uint32_t procs = 64;
  const std::vector<Time> latencies{8, 32, 128, 500};
  std::vector<double> means;
  std::uint64_t seed_base = 90000;
  for (const Time latency : latencies) {
    const auto results = replicate(base_config(work, procs, latency), 200, seed_base += 1000);
    double sum = 0;
    for (const auto& result : results) sum += static_cast<double>(result.requests_total);
    means.push_back(sum / static_cast<double>(results.size()));
  }

  bool increasing = true;
  bool sublinear = true;
  for (std::size_t i = 1; i < means.size(); ++i) {
    increasing = increasing && means[i] > means[i - 1];
    sublinear = sublinear && means[i] < 4.0 * means[i - 1];
  }
  std::ostringstream out;
  out << "mean steal requests";
  for (std::size_t i = 0; i < means.size(); ++i)
    out << " lambda=" << latencies[i] << ":" << means[i];
  detail = out.str();
  return increasing && sublinear;
}

// --------------------------------------------------------------- criterion 10

bool criterion_mwt_startup(std::string& detail) {
  constexpr int kPairs = 500;
  const WorkAmount work = 10000000;
  const Time latency = 250;
  bool all_ok = true;
  std::ostringstream out;
  std::uint64_t seed_base = 100000;
  for (const std::uint32_t procs : {8u, 16u, 32u}) {
    SimConfig mwt = base_config(work, procs, latency, Policy::MWT, true);
    SimConfig swt = base_config(work, procs, latency, Policy::SWT, true);
    std::vector<SimConfig> configs;
    configs.reserve(2 * kPairs);
    for (int pair = 0; pair < kPairs; ++pair) {
      mwt.seed = swt.seed = seed_base + pair;
      configs.push_back(mwt);
      configs.push_back(swt);
    }
    seed_base += kPairs;
    const auto results = run_configs(configs);

    int mwt_no_worse = 0;
    double mwt_makespan_sum = 0;
    double swt_makespan_sum = 0;
    for (int pair = 0; pair < kPairs; ++pair) {
      const auto& m = results[2 * pair];
      const auto& s = results[2 * pair + 1];
      if (m.startup_end <= s.startup_end) ++mwt_no_worse;
      mwt_makespan_sum += static_cast<double>(m.makespan);
      swt_makespan_sum += static_cast<double>(s.makespan);
    }
    const double share = static_cast<double>(mwt_no_worse) / kPairs;
    const double makespan_gap =
        std::abs(mwt_makespan_sum - swt_makespan_sum) / swt_makespan_sum;
    const bool ok = share >= 0.60 && makespan_gap < 0.02;
    all_ok = all_ok && ok;
    out << "p=" << procs << " share=" << share << " gap=" << makespan_gap * 100 << "%"
        << (ok ? " " : "! ");
  }
  detail = out.str();
  return all_ok;
}

struct Criterion {
  int id;
  const char* name;
  std::function<bool(std::string&)> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "golden scripted trace", criterion_golden_trace},
      {2, "threshold makespan pathology", criterion_threshold_pathology},
      {3, "conservation and determinism", criterion_conservation_determinism},
      {4, "threshold safety bound", criterion_threshold_safety},
      {5, "model accuracy median", criterion_model_accuracy},
      {6, "worst-case model error", criterion_worst_case_error},
      {7, "c-prime recovery", criterion_cprime_recovery},
      {8, "limit latency rule", criterion_limit_latency},
      {9, "steal count sublinearity", criterion_steal_count_sublinear},
      {10, "startup phase policy comparison", criterion_mwt_startup},
  };

  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (!wanted.empty() && wanted.count(criterion.id) == 0) continue;
    std::string detail;
    bool passed = false;
    const auto start = Clock::now();
    try {
      passed = criterion.check(detail);
    } catch (const std::exception& error) {
      detail = std::string("exception: ") + error.what();
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%s; %.1fs)\n", passed ? "PASS" : "FAIL", criterion.id,
                criterion.name, detail.c_str(), elapsed);
    std::fflush(stdout);
    if (!passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
