#pragma once

#include <cstdint>
#include <random>

namespace dbird {

using Rng = std::mt19937_64;

/// Sampler phases; each owns a disjoint family of substreams.
enum class StreamPhase : std::uint64_t {
  Omega = 1,
  Cohort = 2,
  Deviation = 3,
  Variance = 4,
  Simulation = 5,
  Replication = 6,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the substream keyed by (seed, sweep, phase, unit). Draws taken from
/// a substream do not depend on how work is scheduled across threads.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t sweep, StreamPhase phase,
                                       std::uint64_t unit) noexcept {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ sweep);
  h = mix64(h ^ static_cast<std::uint64_t>(phase));
  return mix64(h ^ unit);
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t sweep, StreamPhase phase,
                       std::uint64_t unit) {
  return Rng(substream_seed(seed, sweep, phase, unit));
}

/// Draw from InverseGamma(shape, rate), i.e. rate / Gamma(shape, 1).
inline double draw_inverse_gamma(double shape, double rate, Rng& rng) {
  std::gamma_distribution<double> gamma(shape, 1.0);
  return rate / gamma(rng);
}

}  // namespace dbird
