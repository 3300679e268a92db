#pragma once

#include <cstdint>
#include <random>

namespace sagbell {

std::uint64_t splitmix64(std::uint64_t x);

/// Counting-statistics generator: a seeded mt19937_64 with explicit uniform
/// and Poisson samplers, so datasets reproduce bit for bit from the seed.
class CountingRng {
 public:
  explicit CountingRng(std::uint64_t seed);

  /// Independent generator for one sweep point or grid cell. The (seed,
  /// stream) mapping is fixed, so evaluation order cannot change results.
  static CountingRng substream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform in [0, 1) from the top 53 bits of the engine output.
  double uniform();

  /// Poisson sample. CDF inversion below mean 30, transformed rejection
  /// (Hormann's PTRS) above; both consume only uniform().
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t sample_poisson(double mean, CountingRng& rng) { return rng.poisson(mean); }

}  // namespace sagbell
