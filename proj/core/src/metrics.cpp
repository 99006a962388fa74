#include "fedcache/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fedcache {

void accumulate(RunMetrics& metrics, const RoundOutcome& outcome) {
  if (outcome.round != metrics.rounds_recorded) {
    throw std::invalid_argument(
        "accumulate: expected round " + std::to_string(metrics.rounds_recorded) +
        ", got " + std::to_string(outcome.round) +
        " (rounds must be recorded once, in order)");
  }
  metrics.comm_cost_bytes += outcome.bytes_sent;
  metrics.cache_hits_total += outcome.cache_hit_ids.size();
  metrics.peak_mem_bytes = std::max(metrics.peak_mem_bytes, outcome.cache_mem_bytes);
  metrics.mem_by_round.push_back(outcome.cache_mem_bytes);
  metrics.accuracy_by_round.push_back(outcome.eval_accuracy);
  metrics.final_accuracy = outcome.eval_accuracy;
  ++metrics.rounds_recorded;
}

double reduction_vs_baseline(const RunMetrics& cached,
                             const RunMetrics& baseline) {
  if (cached.rounds_recorded != baseline.rounds_recorded) {
    throw std::invalid_argument(
        "reduction_vs_baseline: round counts differ (" +
        std::to_string(cached.rounds_recorded) + " vs " +
        std::to_string(baseline.rounds_recorded) + ")");
  }
  if (baseline.comm_cost_bytes == 0) {
    throw std::invalid_argument("reduction_vs_baseline: baseline sent no bytes");
  }
  return 1.0 - static_cast<double>(cached.comm_cost_bytes) /
                   static_cast<double>(baseline.comm_cost_bytes);
}

}  // namespace fedcache
