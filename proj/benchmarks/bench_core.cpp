#include <benchmark/benchmark.h>

#include "fedcache/cache.hpp"
#include "fedcache/engine.hpp"
#include "fedcache/rng.hpp"

using namespace fedcache;

namespace {

ClientUpdate make_update(int id, double accuracy, std::size_t dim) {
  ClientUpdate u;
  u.client_id = id;
  u.delta.assign(dim, 0.01 * id);
  u.significance = 0.5;
  u.size_bytes = update_size_bytes(dim);
  u.sample_count = 100;
  u.reported_accuracy = accuracy;
  return u;
}

void BM_CacheInsert(benchmark::State& state) {
  const Policy policy = static_cast<Policy>(state.range(0));
  Rng rng(7);
  std::vector<ClientUpdate> updates;
  for (int i = 0; i < 64; ++i) {
    updates.push_back(make_update(i % 32, rng.uniform(), 64));
  }
  for (auto _ : state) {
    UpdateCache cache(8, policy);
    int now = 0;
    for (const auto& u : updates) {
      cache.insert(u, now++);
    }
    benchmark::DoNotOptimize(cache.mem_usage());
  }
}

void BM_CacheLookup(benchmark::State& state) {
  const Policy policy = static_cast<Policy>(state.range(0));
  UpdateCache cache(8, policy);
  Rng rng(9);
  for (int i = 0; i < 8; ++i) {
    cache.insert(make_update(i, rng.uniform(), 64), i);
  }
  int now = 8;
  for (auto _ : state) {
    for (int id = 0; id < 16; ++id) {
      benchmark::DoNotOptimize(cache.lookup_for_substitution(id, now));
    }
    ++now;
  }
}

void BM_FedavgAggregate(benchmark::State& state) {
  const std::size_t dim = static_cast<std::size_t>(state.range(0));
  Rng rng(11);
  GlobalModel model;
  model.params.resize(dim);
  for (auto& p : model.params) p = rng.normal();

  AggregationSet set;
  for (int i = 0; i < 10; ++i) {
    ClientUpdate u = make_update(i, 0.8, dim);
    for (auto& d : u.delta) d = 0.01 * rng.normal();
    u.sample_count = 50 + i;
    set.transmitted.push_back(std::move(u));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fedavg_aggregate(model, set));
  }
}

void BM_LocalTrain(benchmark::State& state) {
  WorkloadSpec spec;  // default benchmark workload
  const auto fed = generate_federation(spec, 21, 1);
  const auto model = make_initial_model(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_train(fed.clients[0], model, spec));
  }
}

void BM_RunRound(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.rounds = 1 << 30;  // never exhausted inside the loop
  Simulation sim(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.run_round());
  }
}

void BM_RunExperiment(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.rounds = 20;
  cfg.policy = Policy::Lru;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_experiment(cfg));
  }
}

}  // namespace

BENCHMARK(BM_CacheInsert)
    ->Arg(static_cast<int>(Policy::Fifo))
    ->Arg(static_cast<int>(Policy::Lru))
    ->Arg(static_cast<int>(Policy::Pbr));
BENCHMARK(BM_CacheLookup)
    ->Arg(static_cast<int>(Policy::Fifo))
    ->Arg(static_cast<int>(Policy::Lru))
    ->Arg(static_cast<int>(Policy::Pbr));
BENCHMARK(BM_FedavgAggregate)->Arg(100)->Arg(1000)->Arg(10000);
BENCHMARK(BM_LocalTrain);
BENCHMARK(BM_RunRound);
BENCHMARK(BM_RunExperiment)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
