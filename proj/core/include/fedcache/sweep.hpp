#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedcache/engine.hpp"

namespace fedcache {

enum class Objective { MinCommAtAccuracyFloor, MaxAccuracyAtCommBudget };

std::string_view to_string(Objective o);
Objective parse_objective(std::string_view s);  // throws std::invalid_argument

// Grid of experiments over thresholds, capacities and policies, repeated
// under consecutive seeds (base.seed, base.seed + 1, ...).
struct SweepSpec {
  ExperimentConfig base;
  std::vector<double> tau_grid = {0.01, 0.10, 0.30};
  std::vector<int> capacity_grid = {3, 4, 6, 8};
  std::vector<Policy> policy_grid = {Policy::None, Policy::Fifo, Policy::Lru,
                                     Policy::Pbr};
  int repeats = 1;
  Objective objective = Objective::MinCommAtAccuracyFloor;
};

void validate(const SweepSpec& spec);

// One report row; the columns of the CSV/JSON reports.
struct SweepRow {
  Policy policy = Policy::None;
  double tau = 0.0;
  int capacity = 0;
  std::uint64_t seed = 0;
  int rounds = 0;
  std::uint64_t comm_bytes = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t peak_mem_bytes = 0;
  double final_accuracy = 0.0;
  double reduction_vs_baseline = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct CellFailure {
  Policy policy;
  double tau;
  int capacity;
  std::uint64_t seed;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (policy, tau, capacity, seed)
  std::vector<CellFailure> failures;
  // Per-seed plain-FedAvg reference cells (tau = 0, policy none); the
  // denominators of every row's reduction_vs_baseline.
  std::vector<SweepRow> baselines;
  // Populated when SweepOptions::keep_logs is set; aligned with rows.
  std::vector<RunResult> logs;
  std::vector<RunResult> baseline_logs;
};

struct SweepOptions {
  int workers = 1;        // cells run in parallel; results stay deterministic
  bool keep_logs = false;
};

// Runs every (tau, capacity, policy, seed) cell plus one baseline run per
// seed. A failing cell is recorded in `failures` and does not abort its
// siblings. Output is a pure function of the spec regardless of workers.
SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& opts = {});

struct RecommendQuery {
  double tau = 0.0;
  int capacity = 0;
  Objective objective = Objective::MinCommAtAccuracyFloor;
  // Absolute overrides. When unset, the accuracy floor is the cell's best
  // mean accuracy minus 0.03, and the comm budget is unconstrained.
  std::optional<double> accuracy_floor;
  std::optional<double> comm_budget;
};

struct Recommendation {
  Policy policy = Policy::None;
  double tau = 0.0;
  int capacity = 0;
  int repeats = 0;              // rows averaged per policy
  double mean_comm_bytes = 0.0;
  double mean_accuracy = 0.0;
  double mean_cache_hits = 0.0;
  double mean_reduction = 0.0;
};

// Exhaustive selector over an existing report: averages each policy's rows
// for the queried (tau, capacity) cell and picks the objective's optimum.
// Ties break toward lower comm, then policy order none < fifo < lru < pbr.
// Every policy present anywhere in the table must cover the queried cell;
// otherwise throws std::invalid_argument listing the missing cells.
// Row order is irrelevant.
Recommendation recommend_strategy(const std::vector<SweepRow>& table,
                                  const RecommendQuery& query);

}  // namespace fedcache
