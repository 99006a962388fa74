#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fedcache {

// Server-side model state: a dense parameter vector plus the round index.
struct GlobalModel {
  std::vector<double> params;
  int round = 0;

  std::size_t dim() const { return params.size(); }
};

// One client's contribution for a round: the parameter delta it trained,
// plus the metadata the server needs for gating, caching and aggregation.
struct ClientUpdate {
  int client_id = 0;
  int round_produced = 0;
  std::vector<double> delta;
  double significance = 0.0;       // relative L2 magnitude, see compute_significance
  std::uint64_t size_bytes = 0;    // deterministic accounting, see update_size_bytes
  int sample_count = 1;            // local training-set size, aggregation weight
  double reported_accuracy = 0.0;  // client's held-out accuracy after local training
};

// Participants of one aggregation step. Fresh transmissions and
// cache-substituted updates are weighted identically.
struct AggregationSet {
  std::vector<ClientUpdate> transmitted;
  std::vector<ClientUpdate> cache_substituted;

  bool empty() const { return transmitted.empty() && cache_substituted.empty(); }
  std::size_t size() const { return transmitted.size() + cache_substituted.size(); }
};

// Accounting model for one serialized update: 64-bit reals plus a fixed
// 64-byte header. Keeps byte counts hardware independent.
inline std::uint64_t update_size_bytes(std::size_t dim) {
  return 8 * static_cast<std::uint64_t>(dim) + 64;
}

double l2_norm(const std::vector<double>& v);

// Guard for the zero-reference case: below this norm every nonzero update
// counts as significant.
inline constexpr double kSignificanceEps = 1e-12;

// Relative update magnitude ||delta||_2 / max(||reference||_2, eps), directly
// comparable against fractional thresholds such as 0.01 / 0.10 / 0.30.
// Throws std::invalid_argument on dimension mismatch or non-finite input.
double compute_significance(const std::vector<double>& delta,
                            const GlobalModel& reference);

// Transmission gate; the boundary is inclusive.
inline bool should_transmit(double significance, double tau) {
  return significance >= tau;
}

// Sample-count-weighted FedAvg step over the aggregation set:
//   params' = params + sum_i (n_i / n_participating) * delta_i
// and round' = round + 1. Throws std::invalid_argument on an empty set
// ("no participants" -- the caller decides whether to skip the round),
// on a dimension mismatch, or on a duplicated client id.
GlobalModel fedavg_aggregate(const GlobalModel& model,
                             const AggregationSet& updates);

}  // namespace fedcache
