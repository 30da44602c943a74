/**
 * @file rng.hpp
 * @brief Deterministic seeded random number generation.
 *
 * All randomness in the library flows through the generators defined here so
 * that a given seed reproduces the same stream on every run and platform.
 * The uniform source is SplitMix64 (Steele, Lea, Flood 2014): a 64-bit
 * counter advanced by the golden-ratio increment and finalized with a
 * variant of the MurmurHash3 mixer. Standard normals come from the
 * Box-Muller transform applied to consecutive uniforms. std::normal_distribution
 * is deliberately avoided: its output is implementation-defined.
 */
#pragma once

#include <cmath>
#include <cstdint>

namespace probspline {

/// SplitMix64 uniform generator. State advances by 0x9E3779B97F4A7C15 per
/// draw; output is the mixed state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in (0, 1]: top 53 bits, shifted into the unit interval.
  double next_uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Standard normal stream: Box-Muller pairs over SplitMix64 uniforms.
/// z0 = sqrt(-2 ln u1) cos(2 pi u2), z1 = sqrt(-2 ln u1) sin(2 pi u2).
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = gen_.next_uniform();
    const double u2 = gen_.next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  SplitMix64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Derives an independent child seed from (base, stream). Defined as two
/// SplitMix64 draws from state base XOR stream * 0xD1B54A32D192ED03; the
/// multiplier decorrelates nearby stream indices. Used to give each solver
/// step, trajectory draw, and noise source its own stream.
[[nodiscard]] inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  SplitMix64 g(base ^ (stream * 0xD1B54A32D192ED03ULL));
  g.next_u64();
  return g.next_u64();
}

}  // namespace probspline
