#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "fedcache/engine.hpp"
#include "support/reference.hpp"

using namespace fedcache;
using fedcache::testing::plain_fedavg_trajectory;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n_clients = 6;
  cfg.clients_per_round = 6;
  cfg.tau = 0.1;
  cfg.cache_capacity = 3;
  cfg.policy = Policy::Fifo;
  cfg.rounds = 8;
  cfg.seed = 1234;
  cfg.workload.task = Task::LogisticBinary;
  cfg.workload.dim = 8;
  cfg.workload.classes = 2;
  cfg.workload.samples_per_client = {60};
  cfg.workload.heterogeneity = 0.3;
  cfg.workload.local_epochs = 1;
  cfg.workload.learning_rate = 0.1;
  cfg.workload.batch_size = 20;
  cfg.workload.noise_std = 0.3;
  return cfg;
}

void check_conservation(const ExperimentConfig& cfg, const RoundOutcome& o) {
  std::set<int> all;
  for (int id : o.transmitted_ids) CHECK(all.insert(id).second);
  for (int id : o.cache_hit_ids) CHECK(all.insert(id).second);
  for (int id : o.skipped_ids) CHECK(all.insert(id).second);
  const auto selected = select_clients(cfg, o.round);
  CHECK(all == std::set<int>(selected.begin(), selected.end()));
}

}  // namespace

TEST_CASE("selection covers the full set when k equals N") {
  auto cfg = small_config();
  const auto ids = select_clients(cfg, 3);
  CHECK(ids == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("selection is deterministic and respects k") {
  auto cfg = small_config();
  cfg.n_clients = 10;
  cfg.clients_per_round = 4;
  for (int round = 0; round < 20; ++round) {
    const auto a = select_clients(cfg, round);
    const auto b = select_clients(cfg, round);
    CHECK(a == b);
    CHECK(a.size() == 4);
    CHECK(std::is_sorted(a.begin(), a.end()));
  }
  // different rounds almost surely differ
  CHECK(select_clients(cfg, 0) != select_clients(cfg, 1));
}

TEST_CASE("selection golden subset") {
  // pinned once from the reference stream: seed 42, round 5, N=10, k=4
  ExperimentConfig cfg = small_config();
  cfg.n_clients = 10;
  cfg.clients_per_round = 4;
  cfg.seed = 42;
  const auto ids = select_clients(cfg, 5);
  CHECK(ids == std::vector<int>{4, 5, 6, 9});
}

TEST_CASE("tau 0 with policy none is exactly plain FedAvg") {
  auto cfg = small_config();
  cfg.tau = 0.0;
  cfg.policy = Policy::None;
  cfg.rounds = 10;

  const auto run = run_experiment(cfg);
  REQUIRE(run.rounds.size() == 10);
  for (const auto& o : run.rounds) {
    CHECK(o.transmitted_ids.size() == 6);
    CHECK(o.cache_hit_ids.empty());
    CHECK(o.skipped_ids.empty());
    CHECK(o.cache_mem_bytes == 0);
  }

  const auto reference = plain_fedavg_trajectory(cfg.workload, cfg.seed,
                                                 cfg.n_clients, cfg.rounds);
  Simulation sim(cfg);
  for (int t = 0; t < cfg.rounds; ++t) {
    sim.run_round();
    const auto& params = sim.model().params;
    REQUIRE(params.size() == reference[static_cast<std::size_t>(t)].size());
    for (std::size_t j = 0; j < params.size(); ++j) {
      CHECK(params[j] ==
            doctest::Approx(reference[static_cast<std::size_t>(t)][j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("an impossible threshold with an empty cache skips everyone") {
  auto cfg = small_config();
  cfg.tau = 1e9;
  cfg.policy = Policy::Lru;
  // lr = 0 keeps every significance at exactly 0; otherwise the zero
  // initial model makes round-0 updates always-significant by definition
  cfg.workload.learning_rate = 0.0;

  Simulation sim(cfg);
  const auto before = sim.model().params;
  const auto o = sim.run_round();
  CHECK(o.transmitted_ids.empty());
  CHECK(o.cache_hit_ids.empty());
  CHECK(o.skipped_ids.size() == 6);
  CHECK(o.bytes_sent == 0);
  CHECK(sim.model().params == before);  // no-participants round leaves the model alone
  CHECK(sim.round() == 1);
}

TEST_CASE("a preloaded cache serves the withheld client verbatim") {
  auto cfg = small_config();
  cfg.tau = 1e9;  // everyone withholds (lr = 0 so significances stay 0)
  cfg.policy = Policy::Lru;
  cfg.workload.learning_rate = 0.0;

  Simulation sim(cfg);
  ClientUpdate canned;
  canned.client_id = 2;
  canned.round_produced = 0;
  canned.delta.assign(sim.model().params.size(), 0.0);
  canned.delta[0] = 0.25;
  canned.delta[1] = -0.5;
  canned.significance = 1.0;
  canned.size_bytes = update_size_bytes(canned.delta.size());
  canned.sample_count = 60;
  canned.reported_accuracy = 0.9;
  REQUIRE(sim.cache() != nullptr);
  sim.cache()->insert(canned, 0);

  const auto o = sim.run_round();
  CHECK(o.cache_hit_ids == std::vector<int>{2});
  CHECK(o.transmitted_ids.empty());
  CHECK(o.skipped_ids.size() == 5);
  CHECK(o.bytes_sent == 0);

  // aggregation used exactly the cached delta (single participant)
  CHECK(sim.model().params[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(sim.model().params[1] == doctest::Approx(-0.5).epsilon(1e-15));
  for (std::size_t j = 2; j < sim.model().params.size(); ++j) {
    CHECK(sim.model().params[j] == 0.0);
  }
}

TEST_CASE("conservation holds for every policy") {
  for (Policy policy : {Policy::None, Policy::Fifo, Policy::Lru, Policy::Pbr}) {
    auto cfg = small_config();
    cfg.policy = policy;
    cfg.tau = 0.05;
    const auto run = run_experiment(cfg);
    for (const auto& o : run.rounds) {
      check_conservation(cfg, o);
    }
  }
}

TEST_CASE("runs are a pure function of the config") {
  auto cfg = small_config();
  cfg.policy = Policy::Pbr;
  cfg.priority.gamma = 0.3;
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  REQUIRE(a.rounds.size() == b.rounds.size());
  for (std::size_t t = 0; t < a.rounds.size(); ++t) {
    CHECK(a.rounds[t].transmitted_ids == b.rounds[t].transmitted_ids);
    CHECK(a.rounds[t].cache_hit_ids == b.rounds[t].cache_hit_ids);
    CHECK(a.rounds[t].skipped_ids == b.rounds[t].skipped_ids);
    CHECK(a.rounds[t].bytes_sent == b.rounds[t].bytes_sent);
    CHECK(a.rounds[t].cache_mem_bytes == b.rounds[t].cache_mem_bytes);
    CHECK(a.rounds[t].eval_accuracy == b.rounds[t].eval_accuracy);
    CHECK(a.rounds[t].eval_loss == b.rounds[t].eval_loss);
  }
  CHECK(a.metrics.comm_cost_bytes == b.metrics.comm_cost_bytes);
  CHECK(a.metrics.cache_hits_total == b.metrics.cache_hits_total);
}

TEST_CASE("zero rounds yields an empty run") {
  auto cfg = small_config();
  cfg.rounds = 0;
  const auto run = run_experiment(cfg);
  CHECK(run.rounds.empty());
  CHECK(run.metrics.comm_cost_bytes == 0);
  CHECK(run.metrics.rounds_recorded == 0);
}

TEST_CASE("invalid configs name the offending field") {
  auto cfg = small_config();
  cfg.tau = -0.5;
  CHECK_THROWS_WITH_AS(run_experiment(cfg), "config.tau: must be finite and >= 0",
                       std::invalid_argument);

  cfg = small_config();
  cfg.clients_per_round = 99;
  CHECK_THROWS_WITH_AS(run_experiment(cfg),
                       "config.clients_per_round: must lie in [1, n_clients]",
                       std::invalid_argument);

  cfg = small_config();
  cfg.cache_capacity = 0;
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);

  cfg = small_config();
  cfg.workload.batch_size = 0;
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("per-round bytes shrink as tau grows") {
  // same seed => same local updates round 0; compare the first round across taus
  for (double lo : {0.01, 0.05}) {
    const double hi = lo + 0.1;
    auto cfg_lo = small_config();
    cfg_lo.tau = lo;
    auto cfg_hi = small_config();
    cfg_hi.tau = hi;
    Simulation a(cfg_lo), b(cfg_hi);
    const auto oa = a.run_round();
    const auto ob = b.run_round();
    CHECK(ob.bytes_sent <= oa.bytes_sent);
    CHECK(std::includes(oa.transmitted_ids.begin(), oa.transmitted_ids.end(),
                        ob.transmitted_ids.begin(), ob.transmitted_ids.end()));
  }
}
