#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace fedcache {

// Stateless avalanche mixer (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t z);

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic counter-based RNG (xoshiro256++ core, splitmix64 seeding).
//
// The standard-library distributions are implementation defined, so every
// random draw in the simulator goes through this class instead; two builds
// of the project produce bit-identical streams for the same seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform();

  // Standard normal via Box-Muller; the spare variate is cached.
  double normal();

  // Uniform integer in [0, bound), unbiased. bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // k distinct values from {0, ..., n-1}, returned sorted ascending.
  std::vector<int> sample_without_replacement(int n, int k);

 private:
  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Named substream derivation: every consumer of randomness owns a stream
// keyed by (root seed, purpose, a, b) -- e.g. ("shuffle", client, round) --
// so adding or removing one consumer never perturbs the others.
std::uint64_t stream_seed(std::uint64_t root, std::string_view purpose,
                          std::uint64_t a = 0, std::uint64_t b = 0);

Rng substream(std::uint64_t root, std::string_view purpose,
              std::uint64_t a = 0, std::uint64_t b = 0);

}  // namespace fedcache
