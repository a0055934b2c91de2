#pragma once

#include <cstdint>
#include <random>

namespace wpr {

/// splitmix64 step; used to derive independent child seeds from a root seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic random source. The generator is pinned to std::mt19937_64
/// (the 64-bit Mersenne Twister, whose output sequence is fixed by the
/// standard) and doubles are derived from the top 53 bits only, so streams
/// are reproducible across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1): (next_u64() >> 11) * 2^-53.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform in [-1, 1): 2*uniform01() - 1.
  double symmetric() { return 2.0 * uniform01() - 1.0; }

  /// Child stream k: seeded with splitmix64 applied to (root_seed + k).
  static Rng child(std::uint64_t root_seed, std::uint64_t stream) {
    std::uint64_t s = root_seed + 0x510f3a9c0b5e31d7ULL * (stream + 1);
    return Rng(splitmix64(s));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wpr
