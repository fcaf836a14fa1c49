#pragma once

// Root counts of polynomials modulo primes: rho_p(f), nu_p(tuple) and the
// root sets Z_p(f).

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include "bhlab/polynomial.hpp"

namespace bhlab {

/// Below this prime, rho_p and nu_p are found by exhaustive evaluation.
inline constexpr std::uint64_t kExhaustiveCountLimit = 50;
/// Below this prime, root sets are found by exhaustive evaluation.
inline constexpr std::uint64_t kExhaustiveRootLimit = 10000;

struct LocalData {
  std::uint64_t p = 0;
  std::vector<std::uint64_t> rho;  // rho_p(f_j) per tuple member
  std::uint64_t nu = 0;
  std::optional<std::vector<std::vector<std::uint64_t>>> roots;

  friend bool operator==(const LocalData&, const LocalData&) = default;
};

/// Number of residues n mod p with f(n) = 0 mod p.  Throws NotPrime.
std::uint64_t rho_p(const Polynomial& f, std::uint64_t p);

/// Number of residues killing f_1 * ... * f_k mod p.  Throws NotPrime.
std::uint64_t nu_p(const PolyTuple& tuple, std::uint64_t p);

/// nu_p for each listed prime, in order.  The entries are trusted to be prime.
std::vector<std::uint64_t> nu_values(const PolyTuple& tuple,
                                     std::span<const std::uint64_t> primes,
                                     unsigned threads = 1);

/// Sorted root set Z_p(f).  Throws NotPrime.
std::vector<std::uint64_t> roots_mod_p(const Polynomial& f, std::uint64_t p);

LocalData local_data(const PolyTuple& tuple, std::uint64_t p, bool with_roots = false);

/// Primes p <= bound at which the root sets of distinct members intersect
/// (equivalently nu_p < sum_j rho_p(f_j)).
struct DisjointnessReport {
  std::uint64_t bound = 0;
  std::vector<std::uint64_t> violations;
  std::optional<std::uint64_t> largest_violation() const {
    if (violations.empty()) return std::nullopt;
    return violations.back();
  }
};
DisjointnessReport disjointness_trend(const PolyTuple& tuple, std::uint64_t bound);

/// Local data for all primes <= bound, computed in parallel and returned in
/// ascending order of p.
std::vector<LocalData> local_data_table(const PolyTuple& tuple, std::uint64_t bound,
                                        unsigned threads = 1);

/// On-disk cache of LocalData, one text file per tuple hash:
///   # localdata v1 <hash> k=<k> bound=<B>
///   p,rho_1,...,rho_k,nu
/// Reads may run concurrently; writes are serialized and atomic (rename).
class LocalDataCache {
 public:
  static constexpr std::uint64_t kMaxCachedPrime = 1000000;

  explicit LocalDataCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path file_for(const PolyTuple& tuple) const;

  /// Cached rows for primes <= bound, if a file covering `bound` exists.
  std::optional<std::vector<LocalData>> load(const PolyTuple& tuple,
                                             std::uint64_t bound) const;
  void store(const PolyTuple& tuple, std::uint64_t bound,
             std::span<const LocalData> rows) const;
  /// Cached table when present, otherwise computed and stored.
  std::vector<LocalData> get_or_compute(const PolyTuple& tuple, std::uint64_t bound,
                                        unsigned threads = 1) const;
  void clear() const;

 private:
  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
};

}  // namespace bhlab
