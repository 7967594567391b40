#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wsim/model.hpp"
#include "wsim/paje.hpp"
#include "wsim/results_io.hpp"
#include "wsim/simulation.hpp"
#include "wsim/sweep.hpp"

namespace {

struct RunArgs {
  std::uint64_t total_work = 0;
  std::uint32_t num_procs = 0;
  std::uint64_t latency = 0;
  std::string policy = "mwt";
  std::string threshold = "on";
  std::optional<std::uint64_t> threshold_value;
  std::uint64_t seed = 0;
  std::string victim_script;
  std::string trace_output;
};

struct SweepArgs {
  std::string sweep_file;
  std::string output;
  std::string summary_output;
  std::optional<std::uint64_t> replications;
  std::optional<std::uint64_t> base_seed;
  unsigned threads = 0;
};

struct ModelArgs {
  std::uint64_t total_work = 0;
  std::uint32_t num_procs = 0;
  std::uint64_t latency = 0;
  double c_prime = 1.8;
  double accept_factor = 1.1;
  double rule_slope = 470.0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

wsim::SimConfig make_config(const RunArgs& args) {
  wsim::SimConfig config;
  config.total_work = args.total_work;
  config.num_procs = args.num_procs;
  config.latency = args.latency;
  const auto policy = wsim::parse_policy(args.policy);
  if (!policy) throw std::invalid_argument("policy must be swt or mwt");
  config.policy = *policy;
  if (args.threshold == "on")
    config.threshold_enabled = true;
  else if (args.threshold == "off")
    config.threshold_enabled = false;
  else
    throw std::invalid_argument("threshold must be on or off");
  config.threshold_value = args.threshold_value;
  config.seed = args.seed;
  if (!args.victim_script.empty())
    config.victim_script = wsim::load_victim_script(args.victim_script);
  config.record_trace = !args.trace_output.empty();
  return config;
}

int cmd_run(const RunArgs& args) {
  const wsim::SimConfig config = make_config(args);
  const wsim::RunOutput output = wsim::run_simulation(config);
  if (!args.trace_output.empty()) wsim::export_paje(output.trace, args.trace_output);
  std::cout << wsim::to_json(output.result) << '\n';
  return 0;
}

std::string default_summary_path(const std::string& output) {
  const std::string suffix = ".csv";
  if (output.size() > suffix.size() &&
      output.compare(output.size() - suffix.size(), suffix.size(), suffix) == 0)
    return output.substr(0, output.size() - suffix.size()) + ".summary.csv";
  return output + ".summary.csv";
}

int cmd_sweep(const SweepArgs& args) {
  wsim::SweepSpec spec = wsim::parse_sweep(read_file(args.sweep_file));
  if (args.replications) spec.replications = *args.replications;
  if (args.base_seed) spec.base_seed = *args.base_seed;
  if (!args.output.empty()) spec.output_path = args.output;
  if (!args.summary_output.empty()) spec.summary_output_path = args.summary_output;
  if (spec.output_path.empty())
    throw std::invalid_argument(
        "sweep: no results path (set output= in the sweep file or pass --output)");
  if (spec.summary_output_path.empty())
    spec.summary_output_path = default_summary_path(spec.output_path);
  spec.validate();

  const std::vector<wsim::SimResult> results = wsim::run_sweep(spec, args.threads);
  wsim::write_results(results, spec.output_path);
  wsim::write_summary(results, spec.summary_output_path);
  std::cerr << "wrote " << results.size() << " runs to " << spec.output_path << " and "
            << spec.config_count() << " summaries to " << spec.summary_output_path << '\n';
  return 0;
}

int cmd_fit(const std::string& input_csv) {
  const auto rows = wsim::read_results(input_csv);
  if (rows.empty()) throw std::runtime_error("fit: results file holds no rows");

  // Mean makespan per configuration, keeping only in-model rows (W > 2*lambda).
  struct Group {
    wsim::ResultRow key;
    double sum = 0;
    std::uint64_t count = 0;
  };
  std::vector<Group> groups;
  const auto same_config = [](const wsim::ResultRow& a, const wsim::ResultRow& b) {
    return a.total_work == b.total_work && a.num_procs == b.num_procs &&
           a.latency == b.latency && a.policy == b.policy &&
           a.threshold_enabled == b.threshold_enabled;
  };
  for (const auto& row : rows) {
    Group* group = nullptr;
    for (auto& candidate : groups)
      if (same_config(candidate.key, row)) {
        group = &candidate;
        break;
      }
    if (!group) {
      groups.push_back({row, 0, 0});
      group = &groups.back();
    }
    group->sum += static_cast<double>(row.makespan);
    ++group->count;
  }

  std::vector<wsim::FitPoint> points;
  std::size_t skipped = 0;
  for (const auto& group : groups) {
    if (!(group.key.total_work > 2 * group.key.latency)) {
      ++skipped;
      continue;
    }
    points.push_back({static_cast<double>(group.key.total_work),
                      static_cast<double>(group.key.num_procs),
                      static_cast<double>(group.key.latency),
                      group.sum / static_cast<double>(group.count)});
  }
  if (skipped > 0)
    std::cerr << "fit: skipped " << skipped << " out-of-model configuration(s) with W <= 2*lambda\n";
  if (points.empty()) throw std::runtime_error("fit: no in-model configurations");

  std::printf("%.9g\n", wsim::fit_cprime(points));
  return 0;
}

int cmd_predict(const ModelArgs& args) {
  const double predicted =
      wsim::predict_makespan(static_cast<double>(args.total_work),
                             static_cast<double>(args.num_procs),
                             static_cast<double>(args.latency), args.c_prime);
  std::printf("%.10g\n", predicted);
  return 0;
}

int cmd_limit(const ModelArgs& args) {
  const double limit =
      wsim::limit_latency(static_cast<double>(args.total_work),
                          static_cast<double>(args.num_procs), args.c_prime, args.accept_factor);
  const std::uint64_t procs = wsim::max_processors(
      static_cast<double>(args.total_work), static_cast<double>(args.latency), args.rule_slope);
  nlohmann::ordered_json j;
  j["limit_latency"] = limit;
  j["max_processors"] = procs;
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wsim: discrete-event simulator of randomized work stealing with "
               "communication latency, plus its analytic makespan model"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Execute one simulation and print the result as JSON");
  run->add_option("--W", run_args.total_work, "total work in time units")->required();
  run->add_option("--p", run_args.num_procs, "number of processors")->required();
  run->add_option("--lambda", run_args.latency, "one-way message latency in time units")
      ->required();
  run->add_option("--policy", run_args.policy, "steal response policy: swt or mwt (default mwt)")
      ->check(CLI::IsMember({"swt", "mwt"}));
  run->add_option("--threshold", run_args.threshold,
                  "refuse steals when the victim holds too little work: on or off (default on)")
      ->check(CLI::IsMember({"on", "off"}));
  run->add_option("--threshold-value", run_args.threshold_value,
                  "steal threshold in work units (default 2*lambda)");
  run->add_option("--seed", run_args.seed, "PRNG seed (default 0)");
  run->add_option("--victim-script", run_args.victim_script,
                  "file of 'thief victim' pairs overriding random victim selection");
  run->add_option("--trace-output", run_args.trace_output, "write a Paje trace to this path");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run a parameter sweep and write per-run plus per-configuration CSV files");
  sweep->add_option("--sweep-file", sweep_args.sweep_file, "sweep description file")->required();
  sweep->add_option("--output", sweep_args.output, "results CSV path (overrides the sweep file)");
  sweep->add_option("--summary-output", sweep_args.summary_output,
                    "summary CSV path (default: results path with a .summary.csv suffix)");
  sweep->add_option("--replications", sweep_args.replications,
                    "replications per configuration (overrides the sweep file)");
  sweep->add_option("--seed", sweep_args.base_seed, "base seed (overrides the sweep file)");
  sweep->add_option("--threads", sweep_args.threads,
                    "worker threads (default: hardware concurrency)");

  std::string fit_input;
  CLI::App* fit = app.add_subcommand(
      "fit", "Fit the latency-aware makespan constant c' to a results CSV");
  fit->add_option("--input-csv", fit_input, "results CSV produced by run/sweep")->required();

  ModelArgs predict_args;
  CLI::App* predict =
      app.add_subcommand("predict", "Print the model makespan W/p + 2*lambda*c'*log2(W/(2*lambda))");
  predict->add_option("--W", predict_args.total_work, "total work")->required();
  predict->add_option("--p", predict_args.num_procs, "number of processors")->required();
  predict->add_option("--lambda", predict_args.latency, "one-way message latency")->required();
  predict->add_option("--c-prime", predict_args.c_prime, "model constant (default 1.8)");

  ModelArgs limit_args;
  CLI::App* limit = app.add_subcommand(
      "limit", "Print the largest acceptable latency and the processor-count rule of thumb");
  limit->add_option("--W", limit_args.total_work, "total work")->required();
  limit->add_option("--p", limit_args.num_procs, "number of processors")->required();
  limit->add_option("--lambda", limit_args.latency, "latency for the max-processors rule")
      ->required();
  limit->add_option("--c-prime", limit_args.c_prime, "model constant (default 1.8)");
  limit->add_option("--accept-factor", limit_args.accept_factor,
                    "acceptable overhead factor over W/p (default 1.1)");
  limit->add_option("--rule-slope", limit_args.rule_slope,
                    "slope of the W/p = slope*lambda rule (default 470)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (fit->parsed()) return cmd_fit(fit_input);
    if (predict->parsed()) return cmd_predict(predict_args);
    if (limit->parsed()) return cmd_limit(limit_args);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  }
  return 0;
}
