#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "genmod/types.hpp"

// Seeding and sampling helpers. Everything here is deterministic across
// platforms: we use the standardized mt19937_64 engine and derive doubles
// from its raw bits instead of going through std::uniform_real_distribution,
// whose output is implementation-defined.

namespace genmod {

// SplitMix64 finalizer; used to hash seed material into child seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent child seed from (parent seed, index, stream tag).
/// Used so every replication / dataset / fold assignment gets its own
/// reproducible stream that can be re-created in isolation.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 std::uint64_t stream_tag) {
  return splitmix64(splitmix64(splitmix64(master) ^ index) ^ stream_tag);
}

// Stream tags for derive_seed; arbitrary distinct constants.
namespace stream {
constexpr std::uint64_t kTrain = 0x7261696eULL;
constexpr std::uint64_t kTest = 0x74657374ULL;
constexpr std::uint64_t kReference = 0x6c737266ULL;
constexpr std::uint64_t kSplit = 0x73706c74ULL;
constexpr std::uint64_t kFolds = 0x666f6c64ULL;
constexpr std::uint64_t kSigns = 0x7369676eULL;
constexpr std::uint64_t kNoise = 0x6e6f6973ULL;
constexpr std::uint64_t kSample = 0x73616d70ULL;
constexpr std::uint64_t kPlant = 0x706c6e74ULL;
}  // namespace stream

/// Deterministic RNG wrapper around mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1), from the top 53 bits of the engine output.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [-1, 1).
  double uniform_sym() { return 2.0 * uniform01() - 1.0; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased uniform integer in [0, n); rejection sampling on raw draws.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Standard normal via Box-Muller on the portable uniform01.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  double rademacher() { return (engine_() & 1ULL) ? 1.0 : -1.0; }

  /// Fisher-Yates permutation of 0..n-1 (portable; std::shuffle is not).
  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
      std::swap(p[i], p[j]);
    }
    return p;
  }

  /// k distinct indices from 0..n-1, in draw order.
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> p = permutation(n);
    p.resize(k);
    return p;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace genmod
