#include "fedcache/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "fedcache/rng.hpp"

namespace fedcache {

void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("config." + msg);
  };
  if (cfg.n_clients < 1) fail("n_clients: must be >= 1");
  if (cfg.clients_per_round < 1 || cfg.clients_per_round > cfg.n_clients) {
    fail("clients_per_round: must lie in [1, n_clients]");
  }
  if (!(cfg.tau >= 0.0) || !std::isfinite(cfg.tau)) {
    fail("tau: must be finite and >= 0");
  }
  if (cfg.cache_capacity < 1) fail("cache_capacity: must be >= 1");
  if (cfg.rounds < 0) fail("rounds: must be >= 0");
  if (cfg.priority.alpha < 0 || cfg.priority.beta < 0 ||
      cfg.priority.alpha + cfg.priority.beta <= 0) {
    fail("priority: need alpha >= 0, beta >= 0, alpha + beta > 0");
  }
  validate(cfg.workload, cfg.n_clients);
}

std::vector<int> select_clients(const ExperimentConfig& cfg, int round) {
  if (cfg.clients_per_round == cfg.n_clients) {
    std::vector<int> all(static_cast<std::size_t>(cfg.n_clients));
    for (int i = 0; i < cfg.n_clients; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }
  Rng rng = substream(cfg.seed, "select", static_cast<std::uint64_t>(round));
  return rng.sample_without_replacement(cfg.n_clients, cfg.clients_per_round);
}

Simulation::Simulation(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
  validate(cfg_);
  fed_ = generate_federation(cfg_.workload, cfg_.seed, cfg_.n_clients);
  model_ = make_initial_model(cfg_.workload);
  if (cfg_.policy != Policy::None) {
    cache_.emplace(cfg_.cache_capacity, cfg_.policy, cfg_.priority);
  }
}

RoundOutcome Simulation::run_round() {
  const int now = model_.round;
  RoundOutcome out;
  out.round = now;

  AggregationSet agg;
  for (int id : select_clients(cfg_, now)) {
    const auto& ds = fed_.clients[static_cast<std::size_t>(id)];
    ClientUpdate update = local_train(ds, model_, cfg_.workload);

    if (should_transmit(update.significance, cfg_.tau)) {
      out.transmitted_ids.push_back(id);
      out.bytes_sent += update.size_bytes;
      if (cache_) {
        cache_->insert(update, now);
      }
      agg.transmitted.push_back(std::move(update));
      continue;
    }

    // Withheld: the client spends no bytes; the server falls back to the
    // cached copy from an earlier round, if one is eligible.
    if (cache_) {
      if (auto cached = cache_->lookup_for_substitution(id, now)) {
        out.cache_hit_ids.push_back(id);
        agg.cache_substituted.push_back(std::move(*cached));
        continue;
      }
    }
    out.skipped_ids.push_back(id);
  }

  if (!agg.empty()) {
    model_ = fedavg_aggregate(model_, agg);
  } else {
    model_.round += 1;  // no participants: parameters unchanged
  }

  out.cache_mem_bytes = cache_ ? cache_->mem_usage() : 0;
  const EvalResult ev = evaluate_global(model_, fed_);
  out.eval_accuracy = ev.accuracy;
  out.eval_loss = ev.loss;
  return out;
}

RunResult Simulation::run_to_completion() {
  if (model_.round != 0) {
    throw std::logic_error("run_to_completion: simulation already advanced");
  }
  RunResult result;
  result.rounds.reserve(static_cast<std::size_t>(cfg_.rounds));
  while (model_.round < cfg_.rounds) {
    RoundOutcome out = run_round();
    accumulate(result.metrics, out);
    result.rounds.push_back(std::move(out));
  }
  return result;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  Simulation sim(cfg);
  return sim.run_to_completion();
}

}  // namespace fedcache
