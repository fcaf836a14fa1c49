#include <gtest/gtest.h>

#include <cmath>

#include "bhlab/rng.hpp"

using namespace bhlab;
using u128 = unsigned __int128;

TEST(Rng, SplitMixReferenceValues) {
  // First outputs of the reference SplitMix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(splitmix64(kGoldenGamma), 0x6e789e6aa1b965f4ULL);
}

TEST(Rng, XoshiroReferenceValues) {
  // xoshiro256++ from state {1, 2, 3, 4}: rotl(1 + 4, 23) + 1, then the
  // second output computed by hand from the updated state.
  Xoshiro256pp gen(1, 2, 3, 4);
  EXPECT_EQ(gen(), 41943041ULL);
  EXPECT_EQ(gen(), 58720359ULL);
}

TEST(Rng, FnvReference) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Rng, CounterStreamsAreRandomAccess) {
  auto a = counter_stream(7, kResidueTag, 101);
  auto b = counter_stream(7, kResidueTag, 101);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
  auto c = counter_stream(8, kResidueTag, 101);
  auto d = counter_stream(7, kBernoulliTag, 101);
  auto e = counter_stream(7, kResidueTag, 101);
  const auto first = e();
  EXPECT_NE(c(), first);
  EXPECT_NE(d(), first);
}

TEST(Rng, BernoulliThresholdIsExactFloor) {
  EXPECT_EQ(bernoulli_threshold(0.0), 0u);
  EXPECT_EQ(bernoulli_threshold(-1.0), 0u);
  EXPECT_EQ(bernoulli_threshold(1.0), u128{1} << 64);
  EXPECT_EQ(bernoulli_threshold(2.5), u128{1} << 64);
  EXPECT_EQ(bernoulli_threshold(0.5), u128{1} << 63);
  EXPECT_EQ(bernoulli_threshold(0.75), (u128{3} << 62));
  EXPECT_EQ(bernoulli_threshold(std::ldexp(1.0, -70)), 0u);
  EXPECT_EQ(bernoulli_threshold(std::ldexp(1.0, -64)), 1u);
  // 0.1 = 0x1.999999999999ap-4; floor(0.1 * 2^64) from the exact binary value
  const u128 expected = (u128{0x1999999999999aULL} << 64 >> 56);
  EXPECT_EQ(bernoulli_threshold(0.1), expected);
  EXPECT_TRUE(bernoulli_accept(0, 1e-300) == false);
  EXPECT_TRUE(bernoulli_accept(~0ULL, 1.0));
}

TEST(Rng, UniformBelowStaysInRangeAndIsBalanced) {
  std::uint64_t counts[7] = {};
  for (std::uint64_t i = 0; i < 70000; ++i) {
    auto gen = counter_stream(3, kResidueTag, i);
    const auto v = uniform_below(gen, 7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  // 4 sigma of a binomial(70000, 1/7)
  const double sigma = std::sqrt(70000.0 * (1.0 / 7) * (6.0 / 7));
  for (auto c : counts) EXPECT_LT(std::abs(static_cast<double>(c) - 10000.0), 4 * sigma);
}
