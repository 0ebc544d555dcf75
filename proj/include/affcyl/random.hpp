#pragma once

#include <cstdint>
#include <random>

namespace affcyl {

/// Seeded generator whose output is identical on every platform.
///
/// std::uniform_real_distribution is implementation-defined, so doubles are
/// built directly from the top 53 bits of mt19937_64.
class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

/// Derive a child seed (splitmix64 step) so that sub-generators are decorrelated.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace affcyl
