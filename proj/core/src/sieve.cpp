#include "bhlab/sieve.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <string>

#include "bhlab/errors.hpp"
#include "bhlab/parallel.hpp"
#include "bhlab/rng.hpp"

namespace bhlab {

std::span<const std::uint64_t> PrimeTable::up_to(double x) const {
  if (x > static_cast<double>(bound) + 0.5 && x < 1.8e19)
    throw DomainError("prime table bound " + std::to_string(bound) +
                      " is below the requested " + std::to_string(x));
  const auto cut = x >= 1.8e19 ? primes.end()
                               : std::upper_bound(primes.begin(), primes.end(),
                                                  static_cast<std::uint64_t>(std::floor(x)));
  return {primes.data(), static_cast<std::size_t>(cut - primes.begin())};
}

namespace {

std::vector<std::uint64_t> simple_primes(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (bound < 2) return out;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Marks composites of [lo, hi] (lo >= 2) into `composite` (index m - lo)
// using base primes up to sqrt(hi).
void mark_composites(std::uint64_t lo, std::uint64_t hi,
                     std::span<const std::uint64_t> base,
                     std::vector<std::uint8_t>& composite) {
  composite.assign(hi - lo + 1, 0);
  for (const std::uint64_t p : base) {
    if (p * p > hi) break;
    std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
    for (std::uint64_t m = start; m <= hi; m += p) composite[m - lo] = 1;
  }
}

}  // namespace

PrimeTable primes_up_to(std::uint64_t bound, unsigned threads) {
  if (bound < 2) throw DomainError("primes_up_to needs a bound >= 2");
  PrimeTable table;
  table.bound = bound;
  const auto base = simple_primes(isqrt(bound));
  const std::uint64_t segments = (bound - 2) / kSegmentSize + 1;
  std::vector<std::vector<std::uint64_t>> found(segments);
  parallel_for(segments, threads, [&](std::size_t s) {
    const std::uint64_t lo = 2 + s * kSegmentSize;
    const std::uint64_t hi = std::min(bound, lo + kSegmentSize - 1);
    std::vector<std::uint8_t> composite;
    mark_composites(lo, hi, base, composite);
    auto& out = found[s];
    for (std::uint64_t m = lo; m <= hi; ++m)
      if (!composite[m - lo]) out.push_back(m);
  });
  std::size_t total = 0;
  for (const auto& f : found) total += f.size();
  table.primes.reserve(total);
  for (const auto& f : found) table.primes.insert(table.primes.end(), f.begin(), f.end());
  return table;
}

std::shared_ptr<const PrimeTable> shared_primes(std::uint64_t bound) {
  static std::mutex mutex;
  static std::shared_ptr<const PrimeTable> table;
  std::lock_guard lock(mutex);
  if (!table || table->bound < bound) {
    const std::uint64_t target =
        std::max<std::uint64_t>({bound, std::uint64_t{1} << 16,
                                 table ? std::min(2 * table->bound, bound * 2) : 0});
    table = std::make_shared<const PrimeTable>(primes_up_to(target));
  }
  return table;
}

namespace {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

void save_prime_cache(const std::filesystem::path& path, const PrimeTable& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write prime cache " + tmp);
    out << "# primes<=" << table.bound << " v1\n";
    for (auto p : table.primes) out << p << '\n';
    if (!out) throw Error("failed writing prime cache " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

PrimeTable load_prime_cache(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open prime cache " + path.string());
  std::string header;
  std::getline(in, header);
  const std::string prefix = "# primes<=";
  if (header.rfind(prefix, 0) != 0 || header.size() < 4 ||
      header.substr(header.size() - 3) != " v1")
    throw ParseError(path.string() + ": bad prime cache header");
  PrimeTable table;
  table.bound = std::stoull(header.substr(prefix.size()));
  std::uint64_t p = 0;
  while (in >> p) table.primes.push_back(p);
  if (!std::is_sorted(table.primes.begin(), table.primes.end()))
    throw ParseError(path.string() + ": primes are not ascending");
  return table;
}

Bitmap prime_bitmap(std::uint64_t lo, std::uint64_t hi, unsigned threads) {
  Bitmap bits(lo, hi);
  if (hi < 2) return bits;
  const std::uint64_t start = std::max<std::uint64_t>(lo, 2);
  const auto base = simple_primes(isqrt(hi));
  const std::uint64_t segments = (hi - start) / kSegmentSize + 1;
  // Segments start at multiples of kSegmentSize from `start`; bits may share
  // a word across a segment boundary, so each segment fills a private buffer
  // and the merge below runs serially.
  std::vector<std::vector<std::uint8_t>> parts(segments);
  parallel_for(segments, threads, [&](std::size_t s) {
    const std::uint64_t a = start + s * kSegmentSize;
    const std::uint64_t b = std::min(hi, a + kSegmentSize - 1);
    mark_composites(a, b, base, parts[s]);
  });
  for (std::size_t s = 0; s < segments; ++s) {
    const std::uint64_t a = start + s * kSegmentSize;
    for (std::size_t i = 0; i < parts[s].size(); ++i)
      if (!parts[s][i]) bits.set(a + i);
  }
  return bits;
}

// ---------------------------------------------------------------------------
// Residue families

void ResidueFamily::validate() const {
  std::uint64_t last = 0;
  for (const auto& c : classes) {
    if (!is_prime(c.p)) throw DomainError("residue family modulus is not prime");
    if (c.p <= last) throw DomainError("residue family primes must ascend");
    if (static_cast<double>(c.p) > z) throw DomainError("residue family prime exceeds z");
    last = c.p;
    if (c.residues.size() > std::min<std::uint64_t>(c.p - 1, K))
      throw DomainError("|I_p| exceeds min(p - 1, K) at p = " + std::to_string(c.p));
    std::set<std::uint64_t> seen;
    for (auto r : c.residues) {
      if (r >= c.p) throw DomainError("residue out of range at p = " + std::to_string(c.p));
      if (!seen.insert(r).second) throw DomainError("repeated residue");
    }
  }
}

ResidueFamily ResidueFamily::single_class(double z, std::uint64_t r) {
  ResidueFamily family;
  family.z = z;
  family.K = 1;
  for (auto p : shared_primes(static_cast<std::uint64_t>(z))->up_to(z))
    family.classes.push_back({p, {r % p}});
  return family;
}

ResidueFamily ResidueFamily::random(double z, std::uint64_t K, std::uint64_t seed) {
  ResidueFamily family;
  family.z = z;
  family.K = K;
  for (auto p : shared_primes(static_cast<std::uint64_t>(z))->up_to(z)) {
    auto gen = counter_stream(seed, stream_tag("family"), p);
    const std::uint64_t want = std::min<std::uint64_t>(p - 1, K);
    std::set<std::uint64_t> picked;
    while (picked.size() < want) picked.insert(uniform_below(gen, p));
    family.classes.push_back({p, {picked.begin(), picked.end()}});
  }
  return family;
}

Bitmap sieve_avoid(const ResidueFamily& family, std::uint64_t v, std::uint64_t w,
                   unsigned threads) {
  if (w < 1) throw DomainError("sieve_avoid needs w >= 1");
  Bitmap bits(v + 1, v + w, true);
  const std::uint64_t segments = (w - 1) / kSegmentSize + 1;
  // kSegmentSize is a multiple of 64, so segments own disjoint words.
  parallel_for(segments, threads, [&](std::size_t s) {
    const std::uint64_t a = v + 1 + s * kSegmentSize;
    const std::uint64_t b = std::min(v + w, a + kSegmentSize - 1);
    for (const auto& c : family.classes) {
      const std::uint64_t a_mod = a % c.p;
      for (const auto r : c.residues) {
        std::uint64_t n = a + (r + c.p - a_mod) % c.p;
        for (; n <= b; n += c.p) bits.reset(n);
      }
    }
  });
  return bits;
}

std::uint64_t count_avoid(const ResidueFamily& family, std::uint64_t v, std::uint64_t w,
                          unsigned threads) {
  constexpr std::uint64_t kChunk = 64 * kSegmentSize;
  std::uint64_t total = 0;
  for (std::uint64_t off = 0; off < w; off += kChunk)
    total += sieve_avoid(family, v + off, std::min(kChunk, w - off), threads).count();
  return total;
}

SegmentReport lemma22_report(const ResidueFamily& family, std::uint64_t v, std::uint64_t w,
                             unsigned threads) {
  if (w < 1) throw DomainError("lemma22_report needs w >= 1");
  if (family.z < 10) throw DomainError("lemma22_report needs z >= 10");
  family.validate();
  SegmentReport report;
  report.exact = count_avoid(family, v, w, threads);
  mpq_class predicted(static_cast<unsigned long>(w));
  for (const auto& c : family.classes)
    predicted *= mpq_class(static_cast<unsigned long>(c.p - c.residues.size()),
                           static_cast<unsigned long>(c.p));
  predicted.canonicalize();
  report.predicted = predicted.get_d();
  if (predicted > 0) {
    mpq_class ratio = mpq_class(static_cast<unsigned long>(report.exact)) / predicted;
    report.ratio = ratio.get_d();
  }
  report.u = std::log(static_cast<double>(w)) / std::log(family.z);
  return report;
}

bool has_small_factor(std::uint64_t m, double t) {
  if (m == 0) throw DomainError("has_small_factor(0) is undefined");
  if (m == 1 || t < 2) return false;
  const double root = std::sqrt(static_cast<double>(m)) + 1;
  const double limit = std::min(t, root);
  for (auto p : shared_primes(static_cast<std::uint64_t>(limit) + 1)->up_to(limit)) {
    if (p * p > m) break;
    if (m % p == 0) return true;
  }
  // No prime factor <= min(t, sqrt m): either m is prime, or every factor
  // exceeds t.
  return static_cast<double>(m) <= t;
}

Bitmap small_factor_marks(std::uint64_t lo, std::uint64_t hi, double t, unsigned threads) {
  if (lo == 0) throw DomainError("small_factor_marks range must start at 1");
  Bitmap bits(lo, hi);
  if (t < 2) return bits;
  const auto table = shared_primes(static_cast<std::uint64_t>(t));
  const auto primes = table->up_to(t);
  const std::uint64_t first_word_aligned = lo;
  const std::uint64_t count = hi - lo + 1;
  const std::uint64_t segments = (count - 1) / kSegmentSize + 1;
  parallel_for(segments, threads, [&](std::size_t s) {
    const std::uint64_t a = first_word_aligned + s * kSegmentSize;
    const std::uint64_t b = std::min(hi, a + kSegmentSize - 1);
    for (auto p : primes) {
      for (std::uint64_t m = (a + p - 1) / p * p; m <= b; m += p) bits.set(m);
    }
  });
  return bits;
}

}  // namespace bhlab
