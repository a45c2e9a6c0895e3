#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace antijam {

/// splitmix64 step. Only used to derive substream seeds, never as the
/// simulation generator itself.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Maps (master seed, domain, index) to an independent stream seed.
///
/// The derivation is a fixed chain of splitmix64 mixes, so a stream's seed
/// depends only on its own coordinates: adding or removing other streams
/// (more UAVs, more sweep points) never perturbs existing ones.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t domain,
                                 std::uint64_t index) {
  std::uint64_t s = master;
  s = splitmix64(s) ^ (domain * 0xd1342543de82ef95ull);
  s = splitmix64(s) ^ (index * 0xaf251af3b0f025b5ull);
  return splitmix64(s);
}

/// Deterministic random stream.
///
/// Wraps std::mt19937_64, whose output sequence is fully pinned by the
/// standard, and converts to doubles/ints without std::*_distribution
/// (those are implementation-defined), so traces are reproducible across
/// platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi], unbiased via rejection.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<int>(x % span);
  }

  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace antijam
