#include "fedcache/cache.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace fedcache {

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::None: return "none";
    case Policy::Fifo: return "fifo";
    case Policy::Lru:  return "lru";
    case Policy::Pbr:  return "pbr";
  }
  return "?";
}

Policy parse_policy(std::string_view s) {
  if (s == "none" || s == "NONE") return Policy::None;
  if (s == "fifo" || s == "FIFO") return Policy::Fifo;
  if (s == "lru" || s == "LRU")   return Policy::Lru;
  if (s == "pbr" || s == "PBR")   return Policy::Pbr;
  throw std::invalid_argument("unknown policy '" + std::string(s) +
                              "' (expected none|fifo|lru|pbr)");
}

UpdateCache::UpdateCache(int capacity, Policy policy, PriorityConfig priority)
    : capacity_(capacity), policy_(policy), priority_(priority) {
  if (capacity_ < 1) {
    throw std::invalid_argument("UpdateCache: capacity must be >= 1");
  }
  if (policy_ == Policy::None) {
    throw std::invalid_argument("UpdateCache: policy 'none' means no cache");
  }
  if (priority_.alpha < 0 || priority_.beta < 0 ||
      priority_.alpha + priority_.beta <= 0) {
    throw std::invalid_argument(
        "UpdateCache: need alpha >= 0, beta >= 0, alpha + beta > 0");
  }
}

InsertResult UpdateCache::insert(const ClientUpdate& update, int now) {
  InsertResult result;

  auto it = entries_.find(update.client_id);
  if (it != entries_.end()) {
    // One entry per client: the newer update takes the slot, nobody else
    // is evicted, and the timestamps restart at now.
    it->second = CacheEntry{update, now, now, 0};
    result.inserted = true;
    result.replaced_existing = true;
    check_capacity();
    return result;
  }

  if (static_cast<int>(entries_.size()) == capacity_) {
    if (policy_ == Policy::Pbr) {
      // A fresh update has recency 1 by definition.
      const double incoming =
          priority_.alpha * update.reported_accuracy + priority_.beta;
      double min_cached = std::numeric_limits<double>::infinity();
      for (const auto& [id, entry] : entries_) {
        min_cached = std::min(min_cached, priority_score(entry, now, priority_));
      }
      if (incoming < min_cached) {
        return result;  // admission skipped, cache keeps its better entries
      }
    }
    const int victim = select_victim(now);
    entries_.erase(victim);
    result.evicted_client_id = victim;
  }

  entries_.emplace(update.client_id, CacheEntry{update, now, now, 0});
  result.inserted = true;
  check_capacity();
  return result;
}

std::optional<ClientUpdate> UpdateCache::lookup_for_substitution(int client_id,
                                                                 int now) {
  auto it = entries_.find(client_id);
  if (it == entries_.end()) {
    return std::nullopt;
  }
  if (policy_ == Policy::Pbr &&
      priority_score(it->second, now, priority_) < priority_.gamma) {
    return std::nullopt;  // outside the eligible set S
  }
  it->second.last_used_at = now;
  ++it->second.use_count;
  return it->second.update;
}

std::uint64_t UpdateCache::mem_usage() const {
  std::uint64_t total = 0;
  for (const auto& [id, entry] : entries_) {
    total += entry.update.size_bytes;
  }
  return total;
}

std::vector<int> UpdateCache::substitution_eligible(int now) const {
  std::vector<int> ids;
  ids.reserve(entries_.size());
  for (const auto& [id, entry] : entries_) {
    if (policy_ != Policy::Pbr ||
        priority_score(entry, now, priority_) >= priority_.gamma) {
      ids.push_back(id);
    }
  }
  return ids;  // map iteration is already ascending
}

int UpdateCache::select_victim(int now) const {
  // Strict < over ascending client ids: equal keys keep the lowest id.
  int victim = -1;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [id, entry] : entries_) {
    double key = 0.0;
    switch (policy_) {
      case Policy::Fifo: key = static_cast<double>(entry.inserted_at); break;
      case Policy::Lru:  key = static_cast<double>(entry.last_used_at); break;
      case Policy::Pbr:  key = priority_score(entry, now, priority_); break;
      case Policy::None: throw std::logic_error("UpdateCache: policy none");
    }
    if (key < best) {
      best = key;
      victim = id;
    }
  }
  return victim;
}

void UpdateCache::check_capacity() const {
  if (static_cast<int>(entries_.size()) > capacity_) {
    throw std::logic_error("UpdateCache: capacity invariant violated");
  }
}

}  // namespace fedcache
