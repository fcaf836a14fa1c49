#pragma once

// Prime generation and segmented residue-class sieving.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "bhlab/bitmap.hpp"

namespace bhlab {

inline constexpr std::uint64_t kSegmentSize = std::uint64_t{1} << 20;

/// Ascending primes <= bound.
struct PrimeTable {
  std::uint64_t bound = 1;
  std::vector<std::uint64_t> primes;

  /// Primes <= x (x may exceed the bound only up to the bound itself).
  std::span<const std::uint64_t> up_to(double x) const;
  std::size_t count_up_to(double x) const { return up_to(x).size(); }
};

/// Segmented sieve of Eratosthenes (segments of kSegmentSize numbers).
PrimeTable primes_up_to(std::uint64_t bound, unsigned threads = 1);

/// Process-wide table covering at least `bound`; grows on demand.
std::shared_ptr<const PrimeTable> shared_primes(std::uint64_t bound);

/// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime(std::uint64_t n) noexcept;

/// Prime cache file: header "# primes<=B v1" then one decimal prime per line.
void save_prime_cache(const std::filesystem::path& path, const PrimeTable& table);
PrimeTable load_prime_cache(const std::filesystem::path& path);

/// Bitmap of the primes in [lo, hi].
Bitmap prime_bitmap(std::uint64_t lo, std::uint64_t hi, unsigned threads = 1);

/// Residue classes I_p to avoid, one set per prime p <= z, |I_p| <= min(p-1, K).
struct ResidueFamily {
  struct Classes {
    std::uint64_t p;
    std::vector<std::uint64_t> residues;
  };
  double z = 0;
  std::uint64_t K = 0;
  std::vector<Classes> classes;  // ascending p

  /// Throws DomainError when a residue is out of range or a bound is broken.
  void validate() const;

  /// I_p = {r mod p} for every prime p <= z.
  static ResidueFamily single_class(double z, std::uint64_t r = 0);
  /// min(p - 1, K) distinct residues per prime p <= z, drawn from the
  /// counter stream addressed by `seed`.
  static ResidueFamily random(double z, std::uint64_t K, std::uint64_t seed);
};

/// Survivors n in (v, v + w] with n mod p not in I_p for every listed p.
/// The returned bitmap covers [v + 1, v + w].
Bitmap sieve_avoid(const ResidueFamily& family, std::uint64_t v, std::uint64_t w,
                   unsigned threads = 1);
/// Survivor count without keeping the bitmap.
std::uint64_t count_avoid(const ResidueFamily& family, std::uint64_t v,
                          std::uint64_t w, unsigned threads = 1);

struct SegmentReport {
  std::uint64_t exact = 0;
  double predicted = 0;  // w * prod (1 - |I_p| / p)
  double ratio = 0;      // exact / predicted
  double u = 0;          // log w / log z
};

/// Exact survivor count against the product main term.  The ratio is formed
/// from exact rationals, so periodic windows give exactly 1.
SegmentReport lemma22_report(const ResidueFamily& family, std::uint64_t v,
                             std::uint64_t w, unsigned threads = 1);

/// True iff some prime p <= t divides m.  m == 1 is false; m == 0 throws.
bool has_small_factor(std::uint64_t m, double t);

/// Bulk form of has_small_factor: bit m set iff m in [lo, hi] has a prime
/// factor <= t, found by sieving rather than trial division.
Bitmap small_factor_marks(std::uint64_t lo, std::uint64_t hi, double t,
                          unsigned threads = 1);

}  // namespace bhlab
