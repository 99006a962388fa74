#pragma once

#include <cstdint>
#include <vector>

namespace fedcache {

// What happened to each selected client in one round. The three id sets are
// pairwise disjoint and together cover exactly the selected set.
struct RoundOutcome {
  int round = 0;
  std::vector<int> transmitted_ids;
  std::vector<int> cache_hit_ids;
  std::vector<int> skipped_ids;
  std::uint64_t bytes_sent = 0;       // client->server payload this round
  std::uint64_t cache_mem_bytes = 0;  // cache residency at end of round
  double eval_accuracy = 0.0;
  double eval_loss = 0.0;
};

}  // namespace fedcache
