#pragma once

#include <cstdint>
#include <vector>

#include "fedcache/round_outcome.hpp"

namespace fedcache {

// Cumulative run accounting:
//   comm_cost_bytes = sum over rounds of transmitted payload bytes
//   cache_hits_total = sum over rounds of |cache hit set|
//   peak_mem_bytes = max over rounds of cache residency
struct RunMetrics {
  std::uint64_t comm_cost_bytes = 0;
  std::uint64_t cache_hits_total = 0;
  std::uint64_t peak_mem_bytes = 0;
  std::vector<std::uint64_t> mem_by_round;
  std::vector<double> accuracy_by_round;
  double final_accuracy = 0.0;
  int rounds_recorded = 0;
};

// Records the next round. Rounds must arrive exactly once and in order;
// anything else throws std::invalid_argument.
void accumulate(RunMetrics& metrics, const RoundOutcome& outcome);

// 1 - cached.comm / baseline.comm. Throws std::invalid_argument when the
// baseline transmitted nothing or the round counts differ.
double reduction_vs_baseline(const RunMetrics& cached,
                             const RunMetrics& baseline);

}  // namespace fedcache
