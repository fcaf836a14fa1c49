#pragma once

// Hit counting, exact expectation oracles, Monte Carlo experiments and the
// block sequence used in the almost-sure argument.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bhlab/bitmap.hpp"
#include "bhlab/models.hpp"
#include "bhlab/polynomial.hpp"
#include "bhlab/thresholds.hpp"

namespace bhlab {

/// Nearest double for values below 2^64, mpz_get_d beyond.  Every
/// threshold comparison on polynomial values goes through this.
double as_real(const mpz_class& v);

/// f_1(n), ..., f_k(n).
std::vector<mpz_class> tuple_values(const PolyTuple& tuple, std::uint64_t n);

/// Which primes sieve a value v.  With a profile: p is active for v iff
/// t(v) < p <= z(v).  With a toy prime set: exactly those primes are active
/// for every value.
struct SievingRule {
  ThresholdProfile profile = ThresholdProfile::desk();
  std::vector<std::uint64_t> toy_primes;

  static SievingRule from_profile(const ThresholdProfile& profile);
  static SievingRule toy(std::vector<std::uint64_t> primes);
  /// m2 uses its profile, bft_r the same profile with t = 1.  Throws
  /// KindMismatch for the Bernoulli kinds.
  static SievingRule for_model(const ModelSpec& spec);

  bool is_toy() const noexcept { return !toy_primes.empty(); }
  bool active(std::uint64_t p, double value) const;
  /// Ascending primes that may be active for values up to `max_value`.
  std::vector<std::uint64_t> candidates(double max_value) const;
};

struct HitOptions {
  unsigned threads = 1;
  std::uint64_t budget = kDefaultBitBudget;
};

/// #{lo <= n <= hi : f_j(n) in the set for every j}.  Materializes the value
/// range when it fits the budget, otherwise queries points (values must fit
/// in 64 bits, else RangeTooLarge).
std::uint64_t count_window(const MembershipSource& source, const PolyTuple& tuple,
                           std::uint64_t lo, std::uint64_t hi, const HitOptions& options = {});

/// Hits with n_min <= n <= x.
std::uint64_t count_hits(const MembershipSource& source, const PolyTuple& tuple,
                         std::uint64_t x, const HitOptions& options = {});

struct HitRow {
  std::uint64_t x = 0;
  std::uint64_t count = 0;
  double M = 0;
  double delta = 0;  // count - M
};

struct HitSeries {
  std::string tuple_hash;
  std::string source;
  std::vector<HitRow> rows;
};

/// Counts at each checkpoint (sorted ascending) against M(x) = S * integral.
HitSeries hit_series(const MembershipSource& source, const PolyTuple& tuple,
                     std::span<const std::uint64_t> checkpoints, double S,
                     const HitOptions& options = {});

/// D_n: no f_j(n) has a prime factor p <= t(f_j(n)).
bool deterministic_part(const PolyTuple& tuple, std::uint64_t n, const ThresholdProfile& profile);

/// D_n for n in (v, v + w], found by sieving the root classes Z_p(f_j).
/// Bit n of the result covers n in [v + 1, v + w].
Bitmap deterministic_block(const PolyTuple& tuple, std::uint64_t v, std::uint64_t w,
                           const ThresholdProfile& profile);

/// R_n for an m2 or bft_r instance: f_j(n) avoids a_p for every active p.
bool random_part(const SetInstance& instance, const PolyTuple& tuple, std::uint64_t n);

/// True iff f_i(n1) == f_j(n2) for some i, j.
bool in_degenerate_set(const PolyTuple& tuple, std::uint64_t n1, std::uint64_t n2);

/// E R_n = prod_p (1 - c_p / p), c_p the number of distinct f_j(n) mod p over
/// the j for which p is active.
mpq_class expected_Rn_exact(const PolyTuple& tuple, std::uint64_t n, const SievingRule& rule);
/// Same product in floating point.
double expected_Rn(const PolyTuple& tuple, std::uint64_t n, const SievingRule& rule);

/// E R_{n1} R_{n2} = prod_p (1 - psi_p / p) over the joint active index set.
mpq_class expected_pair_exact(const PolyTuple& tuple, std::uint64_t n1, std::uint64_t n2,
                              const SievingRule& rule);

/// Brute-force E R_{n1} R_{n2} for a toy prime set: enumerates every residue
/// tuple (a_p) and counts those avoided by all active values.  Exponential in
/// the number of primes; meant as an oracle for expected_pair_exact.
mpq_class expected_pair_bruteforce(const PolyTuple& tuple, std::uint64_t n1, std::uint64_t n2,
                                   std::span<const std::uint64_t> toy_primes);

/// Seed of trial i: splitmix64(master ^ i).
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t i) noexcept;

/// sum_{x < n <= x + y, n >= n_min} E X_n for the model.
double exact_window_mean(const ModelSpec& spec, const PolyTuple& tuple, std::uint64_t x,
                         std::uint64_t y);

struct MonteCarloOptions {
  unsigned threads = 1;
  std::uint64_t budget = kDefaultBitBudget;
  /// Singular series value; computed at `cutoff` when absent.
  std::optional<double> singular;
  std::uint64_t cutoff = 1000000;
};

struct TrialSummary {
  ModelSpec spec;
  std::string tuple_hash;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> counts;
  double mean = 0;
  double variance = 0;  // unbiased
  std::optional<double> exact_mean;
  double singular = 0;
  double M = 0;  // M(x, y)
  double var_over_M2 = 0;
  std::string seeds_hash;
  std::uint64_t clamp_count = 0;
};

/// Per-trial hit counts over (x, x + y].  Requires sqrt(x) < y <= x and
/// trials >= 2 (DomainError otherwise).
TrialSummary monte_carlo(const ModelSpec& spec, const PolyTuple& tuple, std::uint64_t x,
                         std::uint64_t y, std::uint64_t trials,
                         const MonteCarloOptions& options = {});

struct BlockSequence {
  struct Point {
    double x;
    double delta;
  };
  struct Dyadic {
    double X;
    std::uint64_t count;  // points in (X, 2X]
  };
  double K0 = 100;
  std::vector<Point> points;
  std::vector<Dyadic> dyadic;  // X = K0 * 2^j with 2X <= x_max

  std::uint64_t count_in(double lo, double hi) const;
};

/// x_0 = K0, x_{m+1} = x_m + x_m exp(-(log x_m)^(1/3)) up to x_max.
/// Requires K0 >= 10 and x_max > K0.
BlockSequence block_sequence(double K0, double x_max);

}  // namespace bhlab
