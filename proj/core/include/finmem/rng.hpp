#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace finmem {

/// FNV-1a 64-bit. Used for substream naming and content hashes in logs.
constexpr std::uint64_t fnv1a64(std::string_view text,
                                std::uint64_t seed = 0xcbf29ce484222325ull) {
  std::uint64_t h = seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Derives an independent, reproducible seed for a named substream of a run.
/// Consumers draw from their own substream so adding a new random consumer
/// elsewhere cannot shift an existing one's sequence.
constexpr std::uint64_t substream_seed(std::uint64_t master_seed, std::string_view name) {
  return splitmix64(master_seed ^ fnv1a64(name));
}

/// Thin wrapper over std::mt19937_64 (whose output sequence is pinned by the
/// standard) with helpers that avoid std::*_distribution, so draws are
/// bit-identical across standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Index drawn from the categorical distribution given by probs
  /// (assumed to sum to 1); walks the CDF on a single uniform draw.
  std::size_t pick_categorical(std::span<const double> probs) {
    const double u = next_unit();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return probs.empty() ? 0 : probs.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace finmem
