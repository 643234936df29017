#pragma once

#include <cstdint>
#include <random>

#include "mig/matlin.hpp"

namespace mig {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic generator for one (seed, stream) pair. Streams are keyed by
/// trial index, so a trial draws the same numbers whichever worker runs it.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix64(mix64(seed) ^ mix64(~stream))) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return normal_(engine_); }
  /// Circular complex Gaussian, E|z|^2 = 1.
  Complex complex_normal() {
    constexpr double kHalf = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {kHalf * re, kHalf * im};
  }
  /// exp(i phi), phi uniform on [0, 2 pi).
  Complex unit_phase();

  CVector complex_normal_vector(Index n);
  CMatrix complex_normal_matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Stream ids for the independent sampling stages of one experiment.
enum class Stage : std::uint64_t {
  Training = 1,
  Threshold = 2,
  PfaCheck = 3,
  Detection = 4,
  Init = 5,
  Bench = 6,
};

inline std::uint64_t stream_id(Stage stage, std::uint64_t index) {
  return mix64(static_cast<std::uint64_t>(stage) * 0x100000001b3ULL) ^ index;
}

}  // namespace mig
