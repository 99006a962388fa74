#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fedcache/cache.hpp"
#include "fedcache/metrics.hpp"
#include "fedcache/model.hpp"
#include "fedcache/round_outcome.hpp"
#include "fedcache/workload.hpp"

namespace fedcache {

struct ExperimentConfig {
  int n_clients = 10;
  int clients_per_round = 10;
  double tau = 0.1;            // significance threshold; 0 disables gating
  int cache_capacity = 4;      // entry count, not bytes
  Policy policy = Policy::Fifo;
  PriorityConfig priority;
  int rounds = 100;
  WorkloadSpec workload;
  std::uint64_t seed = 42;
};

// Throws std::invalid_argument naming the offending field.
void validate(const ExperimentConfig& cfg);

// Uniform random subset of clients_per_round ids out of [0, n_clients),
// sorted ascending. A pure function of (seed, round, n_clients,
// clients_per_round); the draw comes from its own named substream so no
// other consumer of the seed can perturb it.
std::vector<int> select_clients(const ExperimentConfig& cfg, int round);

struct RunResult {
  RunMetrics metrics;
  std::vector<RoundOutcome> rounds;
};

// One synchronous federated run. Owns the model, the federation data and
// (when the policy is not None) the update cache. Strictly sequential:
// round t+1 depends on round t.
class Simulation {
 public:
  explicit Simulation(ExperimentConfig cfg);

  // Executes the next round: select, locally train, gate on significance,
  // substitute withheld updates from the cache, aggregate, evaluate.
  // A round whose aggregation set is empty leaves the parameters unchanged
  // and is recorded with zero bytes.
  RoundOutcome run_round();

  // Runs all configured rounds from a fresh simulation, accumulating
  // metrics and the round log. Throws if rounds were already run manually.
  RunResult run_to_completion();

  int round() const { return model_.round; }
  const GlobalModel& model() const { return model_; }
  const Federation& federation() const { return fed_; }
  const ExperimentConfig& config() const { return cfg_; }

  // nullptr when the policy is None. Exposed for inspection and for tests
  // that prime the cache.
  UpdateCache* cache() { return cache_ ? &*cache_ : nullptr; }

 private:
  ExperimentConfig cfg_;
  Federation fed_;
  GlobalModel model_;
  std::optional<UpdateCache> cache_;
};

// validate + construct + run all rounds.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace fedcache
