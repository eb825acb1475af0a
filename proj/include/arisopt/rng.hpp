#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace arisopt {

/// SplitMix64 finalizer, used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for the stream identified by (master, ids...). Streams for different id
/// tuples are decorrelated, and adding ids never changes existing streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t state = splitmix64(master);
  for (std::uint64_t id : ids) state = splitmix64(state ^ splitmix64(id + 0x632BE59BD9B4E019ULL));
  return state;
}

/// Reproducible random source: mt19937_64 seeded from a SplitMix64-derived seed.
class RandomSource {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64-streams";

  explicit RandomSource(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Circularly symmetric CN(0, 1): real and imaginary parts N(0, 1/2).
  std::complex<double> complex_normal() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re * kHalfSqrt, im * kHalfSqrt};
  }

  double uniform() { return uniform_(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  static constexpr double kHalfSqrt = 0.70710678118654752440;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace arisopt
