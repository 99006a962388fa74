#include "fedcache/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace fedcache {

double l2_norm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) {
    sum += x * x;
  }
  return std::sqrt(sum);
}

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace

double compute_significance(const std::vector<double>& delta,
                            const GlobalModel& reference) {
  if (delta.size() != reference.params.size()) {
    throw std::invalid_argument(
        "compute_significance: delta dimension " + std::to_string(delta.size()) +
        " != reference dimension " + std::to_string(reference.params.size()));
  }
  if (!all_finite(delta) || !all_finite(reference.params)) {
    throw std::invalid_argument("compute_significance: non-finite input");
  }
  return l2_norm(delta) / std::max(l2_norm(reference.params), kSignificanceEps);
}

GlobalModel fedavg_aggregate(const GlobalModel& model,
                             const AggregationSet& updates) {
  if (updates.empty()) {
    throw std::invalid_argument("fedavg_aggregate: no participants");
  }

  const std::size_t d = model.params.size();
  long long total_samples = 0;
  std::set<int> seen;
  auto check = [&](const ClientUpdate& u) {
    if (u.delta.size() != d) {
      throw std::invalid_argument(
          "fedavg_aggregate: update from client " + std::to_string(u.client_id) +
          " has dimension " + std::to_string(u.delta.size()) + ", expected " +
          std::to_string(d));
    }
    if (u.sample_count <= 0) {
      throw std::invalid_argument("fedavg_aggregate: non-positive sample_count");
    }
    if (!seen.insert(u.client_id).second) {
      throw std::invalid_argument(
          "fedavg_aggregate: client " + std::to_string(u.client_id) +
          " appears twice in the aggregation set");
    }
    total_samples += u.sample_count;
  };
  for (const auto& u : updates.transmitted) check(u);
  for (const auto& u : updates.cache_substituted) check(u);

  GlobalModel out;
  out.params = model.params;
  out.round = model.round + 1;

  auto apply = [&](const ClientUpdate& u) {
    const double w = static_cast<double>(u.sample_count) /
                     static_cast<double>(total_samples);
    for (std::size_t j = 0; j < d; ++j) {
      out.params[j] += w * u.delta[j];
    }
  };
  for (const auto& u : updates.transmitted) apply(u);
  for (const auto& u : updates.cache_substituted) apply(u);

  if (!all_finite(out.params)) {
    throw std::runtime_error("fedavg_aggregate: non-finite parameters produced");
  }
  return out;
}

}  // namespace fedcache
