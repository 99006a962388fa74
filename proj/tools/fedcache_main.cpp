// fedcache: deterministic simulator of cache-assisted federated learning.
//
// Subcommands:
//   run        execute one experiment and print its summary
//   baseline   same, but forced to tau = 0 / policy none (plain FedAvg)
//   sweep      run the (tau, capacity, policy, seed) grid and emit a report
//   recommend  pick the best policy for a (tau, capacity) cell of a report
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure in at
// least one cell.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fedcache/config_file.hpp"
#include "fedcache/engine.hpp"
#include "fedcache/report.hpp"
#include "fedcache/sweep.hpp"

namespace {

using namespace fedcache;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tau;
  std::optional<int> capacity;
  std::optional<std::string> policy;
  std::optional<int> rounds;
  std::optional<int> clients;
  std::string out;
  std::string format = "csv";
};

void add_common_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "key = value config file");
  cmd->add_option("--seed", opts.seed, "base RNG seed");
  cmd->add_option("--tau", opts.tau, "significance threshold");
  cmd->add_option("--capacity", opts.capacity, "cache capacity (entries)");
  cmd->add_option("--policy", opts.policy, "none|fifo|lru|pbr");
  cmd->add_option("--rounds", opts.rounds, "number of rounds");
  cmd->add_option("--clients", opts.clients, "federation size N");
  cmd->add_option("--out", opts.out, "output file path");
  cmd->add_option("--format", opts.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
}

// defaults -> config file -> command line
SweepSpec build_spec(const CommonOpts& opts) {
  SweepSpec spec;
  bool file_sets_participation = false;
  if (!opts.config_path.empty()) {
    const auto file = load_config_file(opts.config_path);
    file_sets_participation = file.values.count("clients_per_round") > 0;
    apply_config(file, spec);
  }
  if (opts.seed) spec.base.seed = *opts.seed;
  if (opts.tau) spec.base.tau = *opts.tau;
  if (opts.capacity) spec.base.cache_capacity = *opts.capacity;
  if (opts.policy) spec.base.policy = parse_policy(*opts.policy);
  if (opts.rounds) spec.base.rounds = *opts.rounds;
  if (opts.clients) {
    spec.base.n_clients = *opts.clients;
    if (!file_sets_participation) {
      spec.base.clients_per_round = *opts.clients;  // default: full participation
    }
  }
  return spec;
}

void print_run_summary(const ExperimentConfig& cfg, const RunMetrics& m) {
  std::cout << "policy: " << to_string(cfg.policy) << "\n"
            << "tau: " << format_double(cfg.tau) << "\n"
            << "capacity: " << cfg.cache_capacity << "\n"
            << "seed: " << cfg.seed << "\n"
            << "rounds: " << m.rounds_recorded << "\n"
            << "comm_bytes: " << m.comm_cost_bytes << "\n"
            << "cache_hits: " << m.cache_hits_total << "\n"
            << "peak_mem_bytes: " << m.peak_mem_bytes << "\n"
            << "final_accuracy: " << format_double(m.final_accuracy) << "\n";
}

int do_run(const CommonOpts& opts, bool force_baseline) {
  SweepSpec spec = build_spec(opts);
  ExperimentConfig cfg = spec.base;
  if (force_baseline) {
    cfg.tau = 0.0;
    cfg.policy = Policy::None;
  }
  validate(cfg);

  const RunResult result = run_experiment(cfg);
  print_run_summary(cfg, result.metrics);
  if (!opts.out.empty()) {
    const auto text = opts.format == "json" ? round_log_to_json(result.rounds)
                                            : round_log_to_csv(result.rounds);
    write_text_file(opts.out, text);
    std::cout << "round_log: " << opts.out << "\n";
  }
  return 0;
}

int do_sweep(const CommonOpts& opts, int workers, std::optional<int> repeats) {
  SweepSpec spec = build_spec(opts);
  if (repeats) spec.repeats = *repeats;
  validate(spec);

  SweepOptions sweep_opts;
  sweep_opts.workers = workers;
  const SweepResult result = run_sweep(spec, sweep_opts);

  for (const auto& f : result.failures) {
    std::cerr << "cell failed: policy=" << to_string(f.policy)
              << " tau=" << format_double(f.tau) << " capacity=" << f.capacity
              << " seed=" << f.seed << ": " << f.message << "\n";
  }

  const auto format = parse_format(opts.format);
  if (opts.out.empty()) {
    std::cout << (format == ReportFormat::Csv ? report_to_csv(result.rows)
                                              : report_to_json(result.rows));
  } else {
    write_report(result.rows, format, opts.out);
    std::cout << "report: " << opts.out << " (" << result.rows.size()
              << " rows)\n";
  }
  return result.failures.empty() ? 0 : 2;
}

int do_recommend(const std::string& report_path, double tau, int capacity,
                 const std::string& objective,
                 std::optional<double> accuracy_floor,
                 std::optional<double> comm_budget) {
  const auto table = read_report(report_path);

  RecommendQuery query;
  query.tau = tau;
  query.capacity = capacity;
  query.objective = parse_objective(objective);
  query.accuracy_floor = accuracy_floor;
  query.comm_budget = comm_budget;

  const Recommendation rec = recommend_strategy(table, query);
  std::cout << "recommended_policy: " << to_string(rec.policy) << "\n"
            << "tau: " << format_double(rec.tau) << "\n"
            << "capacity: " << rec.capacity << "\n"
            << "objective: " << to_string(query.objective) << "\n"
            << "repeats: " << rec.repeats << "\n"
            << "mean_comm_bytes: " << format_double(rec.mean_comm_bytes) << "\n"
            << "mean_accuracy: " << format_double(rec.mean_accuracy) << "\n"
            << "mean_cache_hits: " << format_double(rec.mean_cache_hits) << "\n"
            << "mean_reduction_vs_baseline: " << format_double(rec.mean_reduction)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic simulator of cache-assisted federated learning"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  auto* run_cmd = app.add_subcommand("run", "run a single experiment");
  add_common_options(run_cmd, run_opts);

  CommonOpts baseline_opts;
  auto* baseline_cmd =
      app.add_subcommand("baseline", "run the plain FedAvg reference "
                                     "(tau = 0, policy none)");
  add_common_options(baseline_cmd, baseline_opts);

  CommonOpts sweep_opts;
  int workers = 1;
  std::optional<int> repeats;
  auto* sweep_cmd = app.add_subcommand("sweep", "run the experiment grid");
  add_common_options(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--workers", workers, "parallel sweep workers")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--repeats", repeats, "seeds per cell");

  std::string report_path;
  double rec_tau = 0.1;
  int rec_capacity = 4;
  std::string objective = "min-comm-at-accuracy-floor";
  std::optional<double> accuracy_floor;
  std::optional<double> comm_budget;
  auto* rec_cmd =
      app.add_subcommand("recommend", "pick the best policy from a report");
  rec_cmd->add_option("--report", report_path, "sweep report (csv or json)")
      ->required();
  rec_cmd->add_option("--tau", rec_tau, "queried threshold")->required();
  rec_cmd->add_option("--capacity", rec_capacity, "queried capacity")->required();
  rec_cmd->add_option("--objective", objective,
                      "min-comm-at-accuracy-floor|max-accuracy-at-comm-budget");
  rec_cmd->add_option("--accuracy-floor", accuracy_floor,
                      "absolute accuracy floor override");
  rec_cmd->add_option("--comm-budget", comm_budget,
                      "absolute comm budget override (bytes)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) return do_run(run_opts, false);
    if (baseline_cmd->parsed()) return do_run(baseline_opts, true);
    if (sweep_cmd->parsed()) return do_sweep(sweep_opts, workers, repeats);
    if (rec_cmd->parsed()) {
      return do_recommend(report_path, rec_tau, rec_capacity, objective,
                          accuracy_floor, comm_budget);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
