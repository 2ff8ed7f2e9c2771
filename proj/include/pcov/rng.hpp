#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pcov {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// xoshiro256++ (Blackman and Vigna). State filled from one 64-bit seed by a
/// splitmix64 sequence, so nearby seeds give unrelated streams.
class Xoshiro256pp {
public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed = 0) noexcept {
    for (auto& word : state_) {
      word = mix64(seed);
      seed += 0x9e3779b97f4a7c15ULL;
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  friend bool operator==(const Xoshiro256pp&, const Xoshiro256pp&) = default;

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

/// Engine used for every per-trial substream.
using Engine = Xoshiro256pp;

/// Purpose tag mixed into substream keys. Each purpose draws from its own
/// family of streams, so turning a method on or off never shifts the numbers
/// another method sees.
enum class StreamPurpose : std::uint64_t {
  geometry = 0x67656f6dULL,   // PPP draws; shared by every method at one N
  fading = 0x66616465ULL,     // Rayleigh gains for the empirical estimator
  tail_error = 0x7461696cULL, // order-statistic draws for E[delta_N]
};

/// Seed for trial `trial` of the stream family (root, purpose, interferers).
///
/// The key is a chain of splitmix64 rounds over the four counters. It depends
/// only on its arguments, never on which worker runs the trial, which is what
/// makes parallel runs reproduce serial ones draw for draw.
constexpr std::uint64_t substream_seed(std::uint64_t root, StreamPurpose purpose,
                                       std::uint64_t interferers,
                                       std::uint64_t trial) noexcept {
  std::uint64_t h = mix64(root);
  h = mix64(h ^ static_cast<std::uint64_t>(purpose));
  h = mix64(h ^ interferers);
  return mix64(h ^ trial);
}

inline Engine make_engine(std::uint64_t root, StreamPurpose purpose,
                          std::uint64_t interferers, std::uint64_t trial) {
  return Engine{substream_seed(root, purpose, interferers, trial)};
}

/// Uniform on [0, 1) from the top 53 bits of one engine output.
inline double uniform01(Engine& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& rng, double lo, double hi) noexcept {
  return lo + (hi - lo) * uniform01(rng);
}

/// Exponential with the given mean, by inversion.
inline double exponential(Engine& rng, double mean) noexcept {
  return -mean * std::log1p(-uniform01(rng));
}

} // namespace pcov
