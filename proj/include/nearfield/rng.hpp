#pragma once

#include <cmath>
#include <cstdint>

#include "nearfield/geometry.hpp"

namespace nearfield {

/// SplitMix64 output finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Stateless counter-based generator. The value for (seed, stream, counter) is
///
///   h0 = mix64(seed + G); h1 = mix64(h0 ^ (stream + G)); h2 = mix64(h1 ^ (counter + G))
///
/// with G = 0x9e3779b97f4a7c15, so any draw can be regenerated without replaying a
/// sequential stream.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(mix64(seed + kGolden) ^ (stream + kGolden))) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const { return mix64(key_ ^ (counter + kGolden)); }

  /// Uniform in (0, 1], 53-bit resolution.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on counters 2k and 2k+1.
  double gaussian(std::uint64_t k) const {
    const double u1 = uniform(2 * k);
    const double u2 = uniform(2 * k + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  std::uint64_t key_;
};

/// Derives an independent seed for a child stream (trial, repeat, ...).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master + kGolden) ^ mix64(index + 2 * kGolden));
}

}  // namespace nearfield
