#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <limits>

#include "fedcache/model.hpp"
#include "fedcache/rng.hpp"

using namespace fedcache;

namespace {

ClientUpdate make_update(int id, std::vector<double> delta, int samples = 1) {
  ClientUpdate u;
  u.client_id = id;
  u.delta = std::move(delta);
  u.sample_count = samples;
  u.size_bytes = update_size_bytes(u.delta.size());
  return u;
}

}  // namespace

TEST_CASE("equal-weight mean of two unit updates") {
  GlobalModel m{{0.0, 0.0}, 0};
  AggregationSet set;
  set.transmitted.push_back(make_update(0, {1.0, 0.0}));
  set.transmitted.push_back(make_update(1, {0.0, 1.0}));
  const auto out = fedavg_aggregate(m, set);
  CHECK(out.params[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out.params[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out.round == 1);
}

TEST_CASE("single update is applied verbatim") {
  GlobalModel m{{1.0, 1.0}, 3};
  AggregationSet set;
  set.transmitted.push_back(make_update(5, {2.0, -1.0}, 17));
  const auto out = fedavg_aggregate(m, set);
  CHECK(out.params[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(out.params[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(out.round == 4);
}

TEST_CASE("sample counts weight the mean") {
  GlobalModel m{{0.0, 0.0}, 0};
  AggregationSet set;
  set.transmitted.push_back(make_update(0, {4.0, 0.0}, 1));
  set.cache_substituted.push_back(make_update(1, {0.0, 4.0}, 3));
  const auto out = fedavg_aggregate(m, set);
  CHECK(out.params[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out.params[1] == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("empty set and bad updates are rejected") {
  GlobalModel m{{0.0, 0.0}, 0};
  CHECK_THROWS_WITH_AS(fedavg_aggregate(m, {}), "fedavg_aggregate: no participants",
                       std::invalid_argument);

  AggregationSet mismatched;
  mismatched.transmitted.push_back(make_update(0, {1.0, 2.0, 3.0}));
  CHECK_THROWS_AS(fedavg_aggregate(m, mismatched), std::invalid_argument);

  AggregationSet duplicated;
  duplicated.transmitted.push_back(make_update(0, {1.0, 0.0}));
  duplicated.cache_substituted.push_back(make_update(0, {0.0, 1.0}));
  CHECK_THROWS_AS(fedavg_aggregate(m, duplicated), std::invalid_argument);
}

TEST_CASE("aggregation is permutation invariant") {
  Rng rng(314);
  GlobalModel m;
  m.params.resize(6);
  for (auto& p : m.params) p = rng.normal();

  std::vector<ClientUpdate> updates;
  for (int i = 0; i < 8; ++i) {
    std::vector<double> d(6);
    for (auto& v : d) v = rng.normal();
    updates.push_back(make_update(i, std::move(d), 1 + static_cast<int>(rng.below(20))));
  }

  AggregationSet forward;
  forward.transmitted = updates;
  const auto a = fedavg_aggregate(m, forward);

  AggregationSet reversed;
  reversed.transmitted.assign(updates.rbegin(), updates.rend());
  const auto b = fedavg_aggregate(m, reversed);

  for (std::size_t j = 0; j < a.params.size(); ++j) {
    CHECK(a.params[j] == doctest::Approx(b.params[j]).epsilon(1e-9));
  }
}

TEST_CASE("significance examples") {
  GlobalModel ref{{3.0, 4.0}, 0};
  CHECK(compute_significance({0.0, 0.0}, ref) == 0.0);
  CHECK(compute_significance({0.3, 0.4}, ref) == doctest::Approx(0.1).epsilon(1e-14));

  GlobalModel zero{{0.0, 0.0}, 0};
  // a zero reference makes any nonzero update overwhelmingly significant
  const double s = compute_significance({1.0, 0.0}, zero);
  CHECK(s == doctest::Approx(1e12).epsilon(1e-9));
  CHECK(should_transmit(s, 1e9));
}

TEST_CASE("significance rejects bad input") {
  GlobalModel ref{{1.0, 2.0}, 0};
  CHECK_THROWS_AS(compute_significance({1.0}, ref), std::invalid_argument);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(compute_significance({nan, 0.0}, ref), std::invalid_argument);
}

TEST_CASE("significance is absolutely homogeneous in delta") {
  Rng rng(77);
  GlobalModel ref;
  ref.params.resize(5);
  for (auto& p : ref.params) p = rng.normal();
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> d(5), scaled(5);
    const double c = 10.0 * rng.uniform();
    for (std::size_t j = 0; j < d.size(); ++j) {
      d[j] = rng.normal();
      scaled[j] = c * d[j];
    }
    CHECK(compute_significance(scaled, ref) ==
          doctest::Approx(c * compute_significance(d, ref)).epsilon(1e-12));
  }
}

TEST_CASE("gate boundary is inclusive and tau=0 transmits everything") {
  CHECK(should_transmit(0.15, 0.10));
  CHECK(should_transmit(0.10, 0.10));
  CHECK_FALSE(should_transmit(0.0999, 0.10));
  for (double s : {0.0, 1e-300, 0.5, 1e9}) {
    CHECK(should_transmit(s, 0.0));
  }
}

TEST_CASE("transmitted set shrinks as tau grows") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> sig(12);
    for (auto& s : sig) s = rng.uniform();
    const double t1 = 0.25 * rng.uniform();
    const double t2 = t1 + 0.5 * rng.uniform();
    for (double s : sig) {
      if (should_transmit(s, t2)) CHECK(should_transmit(s, t1));
    }
  }
}

TEST_CASE("size model") {
  CHECK(update_size_bytes(100) == 864);
  CHECK(update_size_bytes(0) == 64);
  CHECK(update_size_bytes(1) == 72);
}
