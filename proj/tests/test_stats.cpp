#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bhlab/errors.hpp"
#include "bhlab/sieve.hpp"
#include "bhlab/singular.hpp"
#include "bhlab/stats.hpp"

using namespace bhlab;

namespace {

PolyTuple tuple_of(const char* text) { return normalize_tuple(parse_tuple(text)); }

ModelSpec spec_of(ModelKind kind, std::uint64_t seed = 0) {
  ModelSpec s;
  s.kind = kind;
  s.seed = seed;
  return s;
}

}  // namespace

TEST(Hits, PrimeCounts) {
  const PrimeOracle primes;
  EXPECT_EQ(count_hits(primes, tuple_of("X"), 100), 25u);
  EXPECT_EQ(count_hits(primes, tuple_of("X, X+2"), 100), 8u);
  EXPECT_EQ(count_hits(primes, tuple_of("X"), 1), 0u);
  EXPECT_EQ(count_hits(primes, tuple_of("X"), 1000000), 78498u);
  // n^2 + 1 prime for n = 2, 4, 6, 10 (n starts at 2)
  EXPECT_EQ(count_hits(primes, tuple_of("X^2+1"), 10), 4u);
}

TEST(Hits, PointAndBulkPathsAgree) {
  const SetInstance inst(spec_of(ModelKind::m2, 3));
  const auto t = tuple_of("X, X+2, X+6");
  const auto bulk = count_hits(inst, t, 200000);
  const auto point = count_hits(inst, t, 200000, {1, 1000});
  EXPECT_EQ(bulk, point);
  EXPECT_EQ(count_hits(inst, t, 200000, {3, kDefaultBitBudget}), bulk);
}

TEST(Hits, WindowsAdd) {
  const SetInstance inst(spec_of(ModelKind::m1, 8));
  const auto t = tuple_of("X, X+2");
  const auto whole = count_hits(inst, t, 300000);
  const auto split = count_window(inst, t, 0, 123456) + count_window(inst, t, 123457, 300000);
  EXPECT_EQ(whole, split);
  EXPECT_EQ(count_window(inst, t, 5, 4), 0u);
}

TEST(Hits, Series) {
  const PrimeOracle primes;
  const auto t = tuple_of("X");
  const std::uint64_t cps[] = {100, 1000, 10000};
  const auto s = hit_series(primes, t, cps, 1.0);
  ASSERT_EQ(s.rows.size(), 3u);
  EXPECT_EQ(s.rows[0].count, 25u);
  EXPECT_EQ(s.rows[1].count, 168u);
  EXPECT_EQ(s.rows[2].count, 1229u);
  for (const auto& r : s.rows) {
    EXPECT_NEAR(r.M, main_term(t, 1.0, double(r.x)), 1e-9);
    EXPECT_NEAR(r.delta, double(r.count) - r.M, 1e-9);
  }
  EXPECT_EQ(s.tuple_hash, t.hash());
}

TEST(DeterministicPart, MatchesDefinition) {
  const auto t = tuple_of("X, X+2");
  const auto desk = ThresholdProfile::desk();
  for (std::uint64_t n = 1000; n < 3000; ++n) {
    bool expected = true;
    for (std::uint64_t v : {n, n + 2}) expected = expected && !has_small_factor(v, desk.t(double(v)));
    ASSERT_EQ(deterministic_part(t, n, desk), expected) << n;
  }
  EXPECT_FALSE(deterministic_part(t, 1000, desk));
  EXPECT_TRUE(deterministic_part(t, 1019, desk));  // 1019 and 1021 are prime
}

TEST(DeterministicPart, BlockMatchesPoint) {
  const auto desk = ThresholdProfile::desk();
  for (const char* text : {"X, X+2", "X^2+1", "X, 2X+1"}) {
    const auto t = tuple_of(text);
    const std::uint64_t v = 5000, w = 20000;
    const auto bits = deterministic_block(t, v, w, desk);
    for (std::uint64_t n = v + 1; n <= v + w; ++n)
      ASSERT_EQ(bits.test(n), deterministic_part(t, n, desk)) << text << " n " << n;
  }
}

TEST(RandomPart, FactorizesMembership) {
  const auto t = tuple_of("X, X+2");
  const SetInstance inst(spec_of(ModelKind::m2, 12));
  const auto desk = inst.spec().profile;
  for (std::uint64_t n = 100; n < 20000; ++n) {
    const bool hit = inst.member(n) && inst.member(n + 2);
    ASSERT_EQ(hit, deterministic_part(t, n, desk) && random_part(inst, t, n)) << n;
  }
}

TEST(RandomPart, MeanMatchesExpectation) {
  const auto t = tuple_of("X, X+2");
  const auto spec = spec_of(ModelKind::m2);
  const auto rule = SievingRule::for_model(spec);
  const std::uint64_t n = 100001;
  const double p = expected_Rn(t, n, rule);
  const int seeds = 10000;
  int hits = 0;
  for (int s = 0; s < seeds; ++s) hits += random_part(SetInstance(spec_of(ModelKind::m2, s)), t, n);
  EXPECT_NEAR(double(hits) / seeds, p, 4 * std::sqrt(p * (1 - p) / seeds));
}

TEST(DegenerateSet, TwinPairs) {
  const auto t = tuple_of("X, X+2");
  EXPECT_TRUE(in_degenerate_set(t, 5, 3));
  EXPECT_TRUE(in_degenerate_set(t, 7, 7));
  EXPECT_FALSE(in_degenerate_set(t, 5, 4));
  for (std::uint64_t n1 = 1; n1 <= 100; ++n1)
    for (std::uint64_t n2 = 1; n2 <= 100; ++n2) {
      const bool expected = n1 == n2 || n1 == n2 + 2 || n2 == n1 + 2;
      ASSERT_EQ(in_degenerate_set(t, n1, n2), expected) << n1 << "," << n2;
    }
  EXPECT_FALSE(in_degenerate_set(tuple_of("X^2+1"), 3, 4));
}

TEST(Expectation, ToyExamples) {
  const auto rule = SievingRule::toy({5, 3});
  EXPECT_EQ(rule.toy_primes, (std::vector<std::uint64_t>{3, 5}));
  EXPECT_EQ(expected_Rn_exact(tuple_of("X"), 1, rule), mpq_class(8, 15));
  // n and n + 3 collapse mod 3
  EXPECT_EQ(expected_Rn_exact(tuple_of("X, X+3"), 1, rule), mpq_class(2, 5));
  EXPECT_EQ(expected_pair_exact(tuple_of("X"), 1, 4, rule), mpq_class(2, 5));
  EXPECT_NEAR(expected_Rn(tuple_of("X"), 1, rule), 8.0 / 15, 1e-15);
  EXPECT_THROW(SievingRule::toy({3, 9}), NotPrime);
  EXPECT_THROW(SievingRule::for_model(spec_of(ModelKind::m1)), KindMismatch);
}

TEST(Expectation, PairAgreesWithBruteForce) {
  std::mt19937_64 gen(2024);
  const char* tuples[] = {"X", "X, X+2", "X, X+6", "X^2+1", "X, 2X+1", "X^2+X+1, X^2+X+3"};
  const std::vector<std::vector<std::uint64_t>> sets = {{3, 5}, {3, 5, 7}, {2, 3, 5, 7}};
  for (int i = 0; i < 60; ++i) {
    const auto t = tuple_of(tuples[i % 6]);
    const auto& primes = sets[i % 3];
    const std::uint64_t n1 = gen() % 500 + 1, n2 = gen() % 500 + 1;
    const auto rule = SievingRule::toy(primes);
    EXPECT_EQ(expected_pair_exact(t, n1, n2, rule), expected_pair_bruteforce(t, n1, n2, primes))
        << tuples[i % 6] << " " << n1 << " " << n2;
    EXPECT_EQ(expected_pair_exact(t, n1, n1, rule), expected_Rn_exact(t, n1, rule));
    EXPECT_EQ(expected_pair_bruteforce(t, n1, n1, primes), expected_Rn_exact(t, n1, rule));
  }
}

TEST(Expectation, PairCountsJointClasses) {
  // psi_p counts the distinct classes of f_j(n1) and f_j(n2) together
  const auto rule = SievingRule::toy({7});
  const auto t = tuple_of("X");
  const auto pair = expected_pair_exact(t, 1, 2, rule);
  EXPECT_EQ(pair, mpq_class(5, 7));
  EXPECT_NE(pair, expected_Rn_exact(t, 1, rule) * expected_Rn_exact(t, 2, rule));
  EXPECT_EQ(expected_pair_exact(t, 1, 8, rule), expected_Rn_exact(t, 1, rule));
}

TEST(Expectation, ProfileRuleUsesActiveWindow) {
  const auto rule = SievingRule::from_profile(ThresholdProfile::fixed(3, 7));
  EXPECT_FALSE(rule.active(3, 100));
  EXPECT_TRUE(rule.active(5, 100));
  EXPECT_TRUE(rule.active(7, 100));
  EXPECT_FALSE(rule.active(11, 100));
  EXPECT_EQ(expected_Rn_exact(tuple_of("X"), 100, rule), mpq_class(24, 35));
}

TEST(WindowMean, CramerIsSumOfProbabilities) {
  const auto spec = spec_of(ModelKind::cramer);
  double expected = 0;
  for (std::uint64_t n = 1001; n <= 2000; ++n) expected += 1 / std::log(double(n));
  EXPECT_NEAR(exact_window_mean(spec, tuple_of("X"), 1000, 1000), expected, 1e-9);
}

TEST(WindowMean, M2MatchesDefinition) {
  const auto spec = spec_of(ModelKind::m2);
  const auto t = tuple_of("X, X+2");
  const auto rule = SievingRule::for_model(spec);
  double expected = 0;
  for (std::uint64_t n = 10001; n <= 20000; ++n)
    if (deterministic_part(t, n, spec.profile)) expected += mpq_class(expected_Rn_exact(t, n, rule)).get_d();
  EXPECT_NEAR(exact_window_mean(spec, t, 10000, 10000), expected, 1e-9 * expected);
}

TEST(MonteCarlo, ThreadsDoNotChangeCounts) {
  const auto spec = spec_of(ModelKind::m2, 99);
  const auto t = tuple_of("X, X+2");
  MonteCarloOptions one;
  one.singular = 1.32;
  auto many = one;
  many.threads = 4;
  const auto a = monte_carlo(spec, t, 20000, 5000, 16, one);
  const auto b = monte_carlo(spec, t, 20000, 5000, 16, many);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.seeds_hash, b.seeds_hash);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.variance, b.variance);
  EXPECT_EQ(a.seeds_hash.size(), 16u);
  auto third = spec;
  third.seed = trial_seed(99, 3);
  EXPECT_EQ(a.counts[3], count_window(SetInstance(third), t, 20001, 25000));
}

TEST(MonteCarlo, DeterministicInstanceHasZeroVariance) {
  // with t fixed at 50 every rough n below ~1000 has q >= 1, so every trial agrees
  auto spec = spec_of(ModelKind::m1, 5);
  ThresholdProfile::parse_t("fixed:50", spec.profile);
  MonteCarloOptions opt;
  opt.singular = 1.0;
  const auto s = monte_carlo(spec, tuple_of("X"), 300, 100, 10, opt);
  EXPECT_EQ(s.variance, 0.0);
  EXPECT_GT(s.clamp_count, 0u);
  EXPECT_NEAR(s.mean, *s.exact_mean, 1e-12);
}

TEST(MonteCarlo, Validation) {
  const auto t = tuple_of("X");
  MonteCarloOptions opt;
  opt.singular = 1.0;
  EXPECT_THROW(monte_carlo(spec_of(ModelKind::m2), t, 10000, 100, 10, opt), DomainError);
  EXPECT_THROW(monte_carlo(spec_of(ModelKind::m2), t, 10000, 10001, 10, opt), DomainError);
  EXPECT_THROW(monte_carlo(spec_of(ModelKind::m2), t, 10000, 1000, 1, opt), DomainError);
}

TEST(MonteCarlo, SeedsAreSplitmixOfIndex) {
  EXPECT_EQ(trial_seed(0, 0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(trial_seed(5, 3), trial_seed(6, 0));
}

TEST(Blocks, Examples) {
  const double K0 = std::exp(8.0);
  const auto seq = block_sequence(K0, 1e6);
  ASSERT_FALSE(seq.points.empty());
  EXPECT_NEAR(seq.points[0].delta / seq.points[0].x, std::exp(-2.0), 1e-12);
  EXPECT_NEAR(double(seq.count_in(K0, 2 * K0)), 5.0, 1.0);
  for (std::size_t i = 1; i < seq.points.size(); ++i) {
    ASSERT_GT(seq.points[i].x, seq.points[i - 1].x);
    ASSERT_NEAR(seq.points[i].x, seq.points[i - 1].x + seq.points[i - 1].delta, 1e-6);
  }
  EXPECT_EQ(seq.dyadic[0].X, K0);
  EXPECT_THROW(block_sequence(5, 100), DomainError);
  EXPECT_THROW(block_sequence(100, 100), DomainError);
}

TEST(Blocks, DyadicCountsGrowSlowly) {
  const auto seq = block_sequence(100, 1e12);
  for (std::size_t j = 1; j < seq.dyadic.size(); ++j) {
    ASSERT_GE(seq.dyadic[j].count + 1, seq.dyadic[j - 1].count);
    const double X = seq.dyadic[j].X;
    // about log 2 * exp((log X)^(1/3)) points per dyadic block
    EXPECT_NEAR(double(seq.dyadic[j].count), std::log(2.0) * std::exp(std::cbrt(std::log(X))),
                3.0);
  }
}
