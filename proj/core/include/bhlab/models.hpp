#pragma once

// Random set models: Cramer, Granville, M1, M2 and the fully sieved set R.
// Membership is a pure function of (spec, m); the bulk path materializes a
// range by sieving and must agree with the point path bit for bit.

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "bhlab/bitmap.hpp"
#include "bhlab/thresholds.hpp"

namespace bhlab {

enum class ModelKind { cramer, granville, m1, m2, bft_r };

std::string to_string(ModelKind kind);
/// Throws ParseError for unknown names.
ModelKind parse_model_kind(std::string_view name);

/// Default cap on materialized bitmaps, in bits (64 MiB).
inline constexpr std::uint64_t kDefaultBitBudget = std::uint64_t{1} << 29;

struct ModelSpec {
  ModelKind kind = ModelKind::m2;
  ThresholdProfile profile = ThresholdProfile::desk();
  std::uint64_t seed = 0;
  double granville_y = 10;

  /// 3 for cramer and granville, 10 for m1 and m2, 8 (= ceil(e^2)) for bft_r.
  std::uint64_t n_min() const noexcept;
  /// True for the kinds with a Bernoulli component (cramer, granville, m1).
  bool bernoulli() const noexcept;
  /// Thresholds used for membership: bft_r sieves every prime <= z(m), so
  /// its t is fixed at 1.
  ThresholdProfile effective_profile() const;

  std::string describe() const;
};

/// a_p drawn uniformly from [0, p) out of the stream (seed, "res", p).
/// Throws NotPrime.
std::uint64_t residue_for_prime(std::uint64_t seed, std::uint64_t p);

/// Anything that answers "is m in the set" and can materialize a range.
class MembershipSource {
 public:
  virtual ~MembershipSource() = default;
  virtual std::uint64_t n_min() const = 0;
  virtual bool member(std::uint64_t m) const = 0;
  /// Bit m set iff member(m), for m in [lo, hi].  Throws RangeTooLarge.
  virtual Bitmap materialize(std::uint64_t lo, std::uint64_t hi, unsigned threads = 1,
                             std::uint64_t budget = kDefaultBitBudget) const = 0;
  virtual std::string describe() const = 0;
};

/// The actual primes.
class PrimeOracle final : public MembershipSource {
 public:
  std::uint64_t n_min() const override { return 2; }
  bool member(std::uint64_t m) const override;
  Bitmap materialize(std::uint64_t lo, std::uint64_t hi, unsigned threads = 1,
                     std::uint64_t budget = kDefaultBitBudget) const override;
  std::string describe() const override { return "primes"; }
};

/// One seeded realization of a model.  Immutable apart from the clamp
/// counter, which counts every evaluation whose probability exceeded 1.
class SetInstance final : public MembershipSource {
 public:
  /// Validates the profile structure (ProfileInvalid).
  explicit SetInstance(ModelSpec spec);

  const ModelSpec& spec() const noexcept { return spec_; }
  std::uint64_t n_min() const override { return spec_.n_min(); }

  /// Inclusion probability for the Bernoulli kinds.  Throws KindMismatch
  /// for m2 and bft_r, DomainError for n < n_min, ProfileInvalid when the
  /// probability exceeds 1 under ClampPolicy::reject.
  double include_probability(std::uint64_t n) const;

  bool member(std::uint64_t m) const override;
  Bitmap materialize(std::uint64_t lo, std::uint64_t hi, unsigned threads = 1,
                     std::uint64_t budget = kDefaultBitBudget) const override;
  std::string describe() const override { return spec_.describe(); }

  std::uint64_t clamp_count() const noexcept { return clamps_.load(); }

 private:
  // q for an n already known to clear the small-factor condition.
  double probability_after_sieve(std::uint64_t n, double t) const;
  Bitmap materialize_sieved(std::uint64_t lo, std::uint64_t hi, unsigned threads) const;
  Bitmap materialize_bernoulli(std::uint64_t lo, std::uint64_t hi, unsigned threads) const;

  ModelSpec spec_;
  ThresholdProfile profile_;
  mutable std::atomic<std::uint64_t> clamps_{0};
  mutable std::shared_ptr<const ThetaTable> theta_;
  mutable std::mutex theta_mutex_;
  std::shared_ptr<const ThetaTable> theta_for(double t) const;
};

/// Probability for a spec without keeping an instance around.
double include_probability(const ModelSpec& spec, std::uint64_t n);

/// Smallest m in [lo, hi + 1] with pred(m) true, for a predicate that is
/// monotone (false then true) on that range; hi + 1 when never true.
template <class Pred>
std::uint64_t first_true(std::uint64_t lo, std::uint64_t hi, Pred&& pred) {
  std::uint64_t a = lo, b = hi + 1;
  while (a < b) {
    const std::uint64_t mid = a + (b - a) / 2;
    if (pred(mid)) b = mid;
    else a = mid + 1;
  }
  return a;
}

}  // namespace bhlab
