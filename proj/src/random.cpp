#include "sagbell/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sagbell {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

namespace {

// ln(k!) with an exact cumulative table for small k and a Stirling series
// beyond; avoids platform-dependent lgamma so streams stay portable.
double log_factorial(double k) {
  static const std::vector<double> table = [] {
    std::vector<double> t(256);
    t[0] = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(double(i));
    return t;
  }();
  if (k < double(table.size())) return table[std::size_t(k)];
  const double inv = 1.0 / k;
  const double inv2 = inv * inv;
  return k * std::log(k) - k + 0.5 * std::log(2.0 * std::numbers::pi * k) +
         inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}

}  // namespace

CountingRng::CountingRng(std::uint64_t seed) : engine_(seed) {}

CountingRng CountingRng::substream(std::uint64_t seed, std::uint64_t stream) {
  return CountingRng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ull)));
}

double CountingRng::uniform() {
  return double(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t CountingRng::poisson(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson mean must be non-negative");
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    // CDF inversion.
    double term = std::exp(-mean);
    double cdf = term;
    const double u = uniform();
    std::uint64_t k = 0;
    while (u > cdf && k < 4096) {
      ++k;
      term *= mean / double(k);
      cdf += term;
    }
    return k;
  }
  // Transformed rejection with squeeze (PTRS).
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return std::uint64_t(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        k * log_mean - mean - log_factorial(k))
      return std::uint64_t(k);
  }
}

}  // namespace sagbell
