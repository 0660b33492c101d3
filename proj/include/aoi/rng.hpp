// Portable pseudo-random streams.
//
// xoshiro256** (Blackman & Vigna, https://prng.di.unimi.it/xoshiro256starstar.c)
// seeded through SplitMix64 (https://prng.di.unimi.it/splitmix64.c). Every
// operation is integer arithmetic, so streams are identical on every
// platform.

#ifndef AOI_RNG_HPP
#define AOI_RNG_HPP

#include <array>
#include <cstdint>

namespace aoi {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  constexpr explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64_mix(state_);
  }

 private:
  std::uint64_t state_;
};

/// Seed of substream `stream` under `seed`. Substreams do not depend on how
/// many other substreams exist.
constexpr std::uint64_t substream_seed(std::uint64_t seed,
                                       std::uint64_t stream) {
  return splitmix64_mix(seed ^ splitmix64_mix(stream + 0x9e3779b97f4a7c15ULL));
}

class Xoshiro256 {
 public:
  constexpr explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  /// Raw state, for checking against the reference implementation.
  constexpr explicit Xoshiro256(const std::array<std::uint64_t, 4>& state)
      : s_(state) {}

  constexpr std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1].
  constexpr double uniform_open_closed() { return 1.0 - uniform(); }

  /// True with probability p; p = 0 never fires and p = 1 always does.
  constexpr bool bernoulli(double p) { return uniform() < p; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace aoi

#endif  // AOI_RNG_HPP
