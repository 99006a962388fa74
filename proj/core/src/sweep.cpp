#include "fedcache/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace fedcache {

std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::MinCommAtAccuracyFloor: return "min-comm-at-accuracy-floor";
    case Objective::MaxAccuracyAtCommBudget: return "max-accuracy-at-comm-budget";
  }
  return "?";
}

Objective parse_objective(std::string_view s) {
  if (s == "min-comm-at-accuracy-floor") return Objective::MinCommAtAccuracyFloor;
  if (s == "max-accuracy-at-comm-budget") return Objective::MaxAccuracyAtCommBudget;
  throw std::invalid_argument(
      "unknown objective '" + std::string(s) +
      "' (expected min-comm-at-accuracy-floor|max-accuracy-at-comm-budget)");
}

void validate(const SweepSpec& spec) {
  validate(spec.base);
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("sweep." + msg);
  };
  if (spec.tau_grid.empty()) fail("tau_grid: must be non-empty");
  for (double t : spec.tau_grid) {
    if (!(t >= 0.0) || !std::isfinite(t)) fail("tau_grid: entries must be finite and >= 0");
  }
  if (spec.capacity_grid.empty()) fail("capacity_grid: must be non-empty");
  for (int c : spec.capacity_grid) {
    if (c < 1) fail("capacity_grid: entries must be >= 1");
  }
  if (spec.policy_grid.empty()) fail("policy_grid: must be non-empty");
  if (spec.repeats < 1) fail("repeats: must be >= 1");
}

namespace {

struct Job {
  ExperimentConfig cfg;
  bool is_baseline = false;
};

struct JobOutput {
  std::optional<RunResult> result;
  std::string error;
};

ExperimentConfig cell_config(const SweepSpec& spec, Policy policy, double tau,
                             int capacity, std::uint64_t seed) {
  ExperimentConfig cfg = spec.base;
  cfg.policy = policy;
  cfg.tau = tau;
  cfg.cache_capacity = capacity;
  cfg.seed = seed;
  return cfg;
}

SweepRow make_row(const ExperimentConfig& cfg, const RunMetrics& m) {
  SweepRow row;
  row.policy = cfg.policy;
  row.tau = cfg.tau;
  row.capacity = cfg.cache_capacity;
  row.seed = cfg.seed;
  row.rounds = m.rounds_recorded;
  row.comm_bytes = m.comm_cost_bytes;
  row.cache_hits = m.cache_hits_total;
  row.peak_mem_bytes = m.peak_mem_bytes;
  row.final_accuracy = m.final_accuracy;
  return row;
}

auto row_key(const SweepRow& r) {
  return std::make_tuple(static_cast<int>(r.policy), r.tau, r.capacity, r.seed);
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& opts) {
  validate(spec);

  // One baseline job per seed, then every grid cell. All jobs are
  // independent; slots keep results addressable regardless of scheduling.
  std::vector<Job> jobs;
  for (int rep = 0; rep < spec.repeats; ++rep) {
    const std::uint64_t seed = spec.base.seed + static_cast<std::uint64_t>(rep);
    Job baseline;
    baseline.cfg = cell_config(spec, Policy::None, 0.0, spec.base.cache_capacity, seed);
    baseline.is_baseline = true;
    jobs.push_back(std::move(baseline));
  }
  const std::size_t n_baselines = jobs.size();
  for (Policy policy : spec.policy_grid) {
    for (double tau : spec.tau_grid) {
      for (int capacity : spec.capacity_grid) {
        for (int rep = 0; rep < spec.repeats; ++rep) {
          const std::uint64_t seed =
              spec.base.seed + static_cast<std::uint64_t>(rep);
          jobs.push_back(Job{cell_config(spec, policy, tau, capacity, seed), false});
        }
      }
    }
  }

  std::vector<JobOutput> outputs(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        outputs[i].result = run_experiment(jobs[i].cfg);
      } catch (const std::exception& e) {
        outputs[i].error = e.what();
      }
    }
  };

  const int workers = std::max(1, opts.workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Assemble rows single-threaded; reductions need the per-seed baselines.
  SweepResult result;
  std::map<std::uint64_t, const RunMetrics*> baseline_by_seed;
  for (std::size_t i = 0; i < n_baselines; ++i) {
    const auto& job = jobs[i];
    auto& out = outputs[i];
    if (!out.result) {
      result.failures.push_back(CellFailure{job.cfg.policy, job.cfg.tau,
                                            job.cfg.cache_capacity, job.cfg.seed,
                                            "baseline run failed: " + out.error});
      continue;
    }
    SweepRow row = make_row(job.cfg, out.result->metrics);
    row.reduction_vs_baseline = 0.0;
    baseline_by_seed[job.cfg.seed] = &out.result->metrics;
    result.baselines.push_back(row);
    if (opts.keep_logs) result.baseline_logs.push_back(std::move(*out.result));
  }

  std::vector<std::pair<SweepRow, RunResult>> cells;
  for (std::size_t i = n_baselines; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    auto& out = outputs[i];
    auto record_failure = [&](const std::string& msg) {
      result.failures.push_back(CellFailure{job.cfg.policy, job.cfg.tau,
                                            job.cfg.cache_capacity, job.cfg.seed,
                                            msg});
    };
    if (!out.result) {
      record_failure(out.error);
      continue;
    }
    auto it = baseline_by_seed.find(job.cfg.seed);
    if (it == baseline_by_seed.end()) {
      record_failure("no baseline available for seed " +
                     std::to_string(job.cfg.seed));
      continue;
    }
    SweepRow row = make_row(job.cfg, out.result->metrics);
    try {
      row.reduction_vs_baseline =
          reduction_vs_baseline(out.result->metrics, *it->second);
    } catch (const std::exception& e) {
      record_failure(e.what());
      continue;
    }
    cells.emplace_back(std::move(row),
                       opts.keep_logs ? std::move(*out.result) : RunResult{});
  }

  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
    return row_key(a.first) < row_key(b.first);
  });
  for (auto& [row, log] : cells) {
    result.rows.push_back(row);
    if (opts.keep_logs) result.logs.push_back(std::move(log));
  }
  std::sort(result.failures.begin(), result.failures.end(),
            [](const CellFailure& a, const CellFailure& b) {
              return std::make_tuple(static_cast<int>(a.policy), a.tau,
                                     a.capacity, a.seed) <
                     std::make_tuple(static_cast<int>(b.policy), b.tau,
                                     b.capacity, b.seed);
            });
  return result;
}

Recommendation recommend_strategy(const std::vector<SweepRow>& table,
                                  const RecommendQuery& query) {
  if (table.empty()) {
    throw std::invalid_argument("recommend_strategy: empty table");
  }

  std::set<Policy> universe;
  for (const auto& row : table) universe.insert(row.policy);

  std::map<Policy, std::vector<const SweepRow*>> cell;
  for (const auto& row : table) {
    if (row.tau == query.tau && row.capacity == query.capacity) {
      cell[row.policy].push_back(&row);
    }
  }

  std::string missing;
  for (Policy p : universe) {
    if (!cell.count(p)) {
      if (!missing.empty()) missing += ", ";
      missing += "(policy=" + std::string(to_string(p)) +
                 ", tau=" + std::to_string(query.tau) +
                 ", capacity=" + std::to_string(query.capacity) + ")";
    }
  }
  if (!missing.empty()) {
    throw std::invalid_argument("recommend_strategy: missing cells: " + missing);
  }

  struct Candidate {
    Policy policy;
    double comm, acc, hits, red;
    int n;
  };
  std::vector<Candidate> cands;
  for (const auto& [policy, rows] : cell) {  // map iterates in policy order
    Candidate c{policy, 0, 0, 0, 0, static_cast<int>(rows.size())};
    for (const auto* r : rows) {
      c.comm += static_cast<double>(r->comm_bytes);
      c.acc += r->final_accuracy;
      c.hits += static_cast<double>(r->cache_hits);
      c.red += r->reduction_vs_baseline;
    }
    c.comm /= c.n;
    c.acc /= c.n;
    c.hits /= c.n;
    c.red /= c.n;
    cands.push_back(c);
  }

  const Candidate* best = nullptr;
  switch (query.objective) {
    case Objective::MinCommAtAccuracyFloor: {
      double best_acc = 0.0;
      for (const auto& c : cands) best_acc = std::max(best_acc, c.acc);
      const double floor = query.accuracy_floor.value_or(best_acc - 0.03);
      for (const auto& c : cands) {
        if (c.acc < floor) continue;
        if (!best || c.comm < best->comm) best = &c;
      }
      if (!best) {
        throw std::invalid_argument(
            "recommend_strategy: no policy meets accuracy floor " +
            std::to_string(floor));
      }
      break;
    }
    case Objective::MaxAccuracyAtCommBudget: {
      double max_comm = 0.0;
      for (const auto& c : cands) max_comm = std::max(max_comm, c.comm);
      const double budget = query.comm_budget.value_or(max_comm);
      for (const auto& c : cands) {
        if (c.comm > budget) continue;
        if (!best || c.acc > best->acc ||
            (c.acc == best->acc && c.comm < best->comm)) {
          best = &c;
        }
      }
      if (!best) {
        throw std::invalid_argument(
            "recommend_strategy: no policy fits comm budget " +
            std::to_string(budget));
      }
      break;
    }
  }

  Recommendation rec;
  rec.policy = best->policy;
  rec.tau = query.tau;
  rec.capacity = query.capacity;
  rec.repeats = best->n;
  rec.mean_comm_bytes = best->comm;
  rec.mean_accuracy = best->acc;
  rec.mean_cache_hits = best->hits;
  rec.mean_reduction = best->red;
  return rec;
}

}  // namespace fedcache
