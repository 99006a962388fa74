#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "fedcache/model.hpp"

namespace fedcache {

// None disables server-side caching entirely (plain gated FedAvg).
enum class Policy { None, Fifo, Lru, Pbr };

std::string_view to_string(Policy p);
Policy parse_policy(std::string_view s);  // throws std::invalid_argument

// Weights of the priority score alpha*accuracy + beta*recency, plus the
// gamma threshold that filters the substitution-eligible set under PBR.
struct PriorityConfig {
  double alpha = 0.7;
  double beta = 0.3;
  double gamma = 0.0;  // 0 disables the filter
};

struct CacheEntry {
  ClientUpdate update;
  int inserted_at = 0;
  int last_used_at = 0;
  std::uint64_t use_count = 0;
};

// 1 / (1 + rounds since last use), in (0, 1].
inline double recency(const CacheEntry& entry, int now) {
  return 1.0 / (1.0 + static_cast<double>(now - entry.last_used_at));
}

inline double priority_score(const CacheEntry& entry, int now,
                             const PriorityConfig& cfg) {
  return cfg.alpha * entry.update.reported_accuracy + cfg.beta * recency(entry, now);
}

struct InsertResult {
  bool inserted = false;           // false only when PBR skips admission
  bool replaced_existing = false;  // same-client overwrite, nothing evicted
  std::optional<int> evicted_client_id;
};

// Bounded store of client updates, at most one entry per client, with a
// pluggable eviction policy:
//   FIFO: evict minimal inserted_at
//   LRU:  evict minimal last_used_at
//   PBR:  evict minimal priority score; an incoming update whose own
//         priority is strictly below every cached entry's is not admitted
// Ties are broken toward the lowest client id so replays are deterministic.
class UpdateCache {
 public:
  UpdateCache(int capacity, Policy policy, PriorityConfig priority = {});

  // Inserts (or overwrites) the update; the entry gets
  // inserted_at = last_used_at = now and a zero use count.
  InsertResult insert(const ClientUpdate& update, int now);

  // Returns the client's cached update and marks it used, or nullopt if the
  // client is absent. Under PBR an entry additionally needs
  // priority_score >= gamma to be eligible; FIFO/LRU ignore gamma.
  std::optional<ClientUpdate> lookup_for_substitution(int client_id, int now);

  // Exact sum of size_bytes over the cached entries.
  std::uint64_t mem_usage() const;

  // Client ids currently eligible for substitution, sorted ascending.
  // Read-only: does not touch recency bookkeeping.
  std::vector<int> substitution_eligible(int now) const;

  int capacity() const { return capacity_; }
  Policy policy() const { return policy_; }
  const PriorityConfig& priority_config() const { return priority_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(int client_id) const { return entries_.count(client_id) > 0; }
  const std::map<int, CacheEntry>& entries() const { return entries_; }

 private:
  int select_victim(int now) const;
  void check_capacity() const;

  int capacity_;
  Policy policy_;
  PriorityConfig priority_;
  std::map<int, CacheEntry> entries_;  // keyed by client_id
};

}  // namespace fedcache
