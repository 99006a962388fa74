#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fedcache/rng.hpp"

using namespace fedcache;

TEST_CASE("same seed reproduces the stream") {
  Rng a(1234), b(1234);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("uniform stays in [0,1)") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("below is bounded and hits every residue") {
  Rng rng(99);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
}

TEST_CASE("normal has roughly standard moments") {
  Rng rng(2024);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("substreams with different purposes are independent") {
  const std::uint64_t root = 42;
  CHECK(stream_seed(root, "select", 3) != stream_seed(root, "shuffle", 3));
  CHECK(stream_seed(root, "select", 3) != stream_seed(root, "select", 4));
  CHECK(stream_seed(root, "select", 3, 1) != stream_seed(root, "select", 3, 2));
  CHECK(stream_seed(root, "select", 3) == stream_seed(root, "select", 3));
  CHECK(stream_seed(root, "select", 3) != stream_seed(root + 1, "select", 3));
}

TEST_CASE("sample_without_replacement yields sorted distinct ids") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ids = rng.sample_without_replacement(20, 8);
    REQUIRE(ids.size() == 8);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      CHECK(ids[i] >= 0);
      CHECK(ids[i] < 20);
      if (i > 0) CHECK(ids[i] > ids[i - 1]);
    }
  }
  CHECK(rng.sample_without_replacement(5, 5) == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(rng.sample_without_replacement(5, 0).empty());
}
