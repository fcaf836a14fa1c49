#pragma once

// Counter-based random streams.
//
// Every random quantity in the library is a pure function of
// (seed, tag, index): the stream key is splitmix64(seed ^ tag ^ index), the
// xoshiro256++ state is seeded with splitmix64(key + i * golden) for
// i = 0..3, and words are drawn from that generator.  Nothing depends on
// query order or thread schedule.

#include <bit>
#include <cstdint>
#include <string_view>

namespace bhlab {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// One step of the SplitMix64 generator applied to x (adds the gamma, then
/// finalizes).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + kGoldenGamma;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over the bytes of a string.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Domain-separation tag for a named stream family ("res", "bern", ...).
constexpr std::uint64_t stream_tag(std::string_view name) noexcept {
  return fnv1a64(name);
}

inline constexpr std::uint64_t kResidueTag = stream_tag("res");
inline constexpr std::uint64_t kBernoulliTag = stream_tag("bern");

class Xoshiro256pp {
 public:
  explicit constexpr Xoshiro256pp(std::uint64_t key) noexcept
      : s_{splitmix64(key), splitmix64(key + kGoldenGamma),
           splitmix64(key + 2 * kGoldenGamma),
           splitmix64(key + 3 * kGoldenGamma)} {}

  /// Generator with an explicit state (not all zero).
  constexpr Xoshiro256pp(std::uint64_t s0, std::uint64_t s1, std::uint64_t s2,
                         std::uint64_t s3) noexcept
      : s_{s0, s1, s2, s3} {}

  constexpr std::uint64_t operator()() noexcept {
    const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

 private:
  std::uint64_t s_[4];
};

/// Generator for the stream addressed by (seed, tag, index).
constexpr Xoshiro256pp counter_stream(std::uint64_t seed, std::uint64_t tag,
                                      std::uint64_t index) noexcept {
  return Xoshiro256pp(splitmix64(seed ^ tag ^ index));
}

/// Unbiased draw from [0, bound) by rejection: accept u < bound * floor(2^64 / bound).
template <class Gen>
constexpr std::uint64_t uniform_below(Gen& gen, std::uint64_t bound) noexcept {
  using u128 = unsigned __int128;
  const u128 two64 = u128{1} << 64;
  const u128 limit = (two64 / bound) * bound;
  for (;;) {
    const std::uint64_t u = gen();
    if (u128{u} < limit) return u % bound;
  }
}

/// floor(q * 2^64) for q in [0, 1], computed exactly from the binary
/// representation of q.  Returned as a 128-bit value so q == 1 maps to 2^64.
unsigned __int128 bernoulli_threshold(double q) noexcept;

/// Bernoulli acceptance: the word is compared against floor(q * 2^64).
inline bool bernoulli_accept(std::uint64_t word, double q) noexcept {
  return static_cast<unsigned __int128>(word) < bernoulli_threshold(q);
}

}  // namespace bhlab
