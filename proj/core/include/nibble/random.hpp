#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace nibble {

/// Per-run generator. All run-level randomness flows through one instance so
/// that (config, seed) fixes every output.
using Rng = std::mt19937_64;

/// Small counter-style generator used where randomness has to be addressable
/// by key (per node pair, per update) rather than by consumption order.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix_keys(std::uint64_t a, std::uint64_t b) {
  SplitMix64 g(a ^ (b * 0xD1B54A32D192ED03ULL));
  g();
  return g() ^ b;
}

inline std::uint64_t mix_keys(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix_keys(mix_keys(a, b), c);
}

template <class Gen>
double uniform01(Gen& gen) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(gen);
}

/// Exactly one draw per call, so callers can promise a fixed consumption pattern.
template <class Gen>
bool bernoulli(Gen& gen, double p) {
  return uniform01(gen) < p;
}

template <class Gen>
std::size_t uniform_index(Gen& gen, std::size_t size) {
  return std::uniform_int_distribution<std::size_t>(0, size - 1)(gen);
}

}  // namespace nibble
