#include "bhlab/localroots.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "bhlab/errors.hpp"
#include "bhlab/modpoly.hpp"
#include "bhlab/parallel.hpp"
#include "bhlab/sieve.hpp"

namespace bhlab {

namespace {

void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw NotPrime(p);
}

std::uint64_t linear_root(const fp::Coeffs& f, std::uint64_t p) {
  // f = f0 + f1 X with f1 != 0
  return fp::mul(fp::sub(0, f[0], p), fp::inverse(f[1], p), p);
}

std::uint64_t rho_known_prime(const Polynomial& f, std::uint64_t p) {
  const fp::Coeffs g = fp::reduce(f.coefficients(), p);
  if (g.empty()) return p;
  if (fp::degree(g) == 0) return 0;
  if (p < kExhaustiveCountLimit) {
    std::uint64_t count = 0;
    for (std::uint64_t n = 0; n < p; ++n) count += fp::eval(g, n, p) == 0;
    return count;
  }
  if (fp::degree(g) == 1) return 1;
  return static_cast<std::uint64_t>(fp::degree(fp::linear_part(g, p)));
}

std::uint64_t nu_known_prime(const PolyTuple& tuple, std::uint64_t p) {
  std::vector<fp::Coeffs> reduced;
  reduced.reserve(tuple.k());
  for (const auto& f : tuple.polys) {
    fp::Coeffs g = fp::reduce(f.coefficients(), p);
    if (g.empty()) return p;
    if (fp::degree(g) >= 1) reduced.push_back(std::move(g));
  }
  if (reduced.empty()) return 0;
  if (p < kExhaustiveCountLimit) {
    std::uint64_t count = 0;
    for (std::uint64_t n = 0; n < p; ++n) {
      const bool killed = std::any_of(reduced.begin(), reduced.end(),
                                      [&](const fp::Coeffs& g) { return fp::eval(g, n, p) == 0; });
      count += killed;
    }
    return count;
  }
  const bool all_linear = std::all_of(reduced.begin(), reduced.end(),
                                      [](const fp::Coeffs& g) { return fp::degree(g) == 1; });
  if (all_linear) {
    std::vector<std::uint64_t> roots;
    roots.reserve(reduced.size());
    for (const auto& g : reduced) roots.push_back(linear_root(g, p));
    std::sort(roots.begin(), roots.end());
    return static_cast<std::uint64_t>(std::unique(roots.begin(), roots.end()) - roots.begin());
  }
  fp::Coeffs product{1};
  for (const auto& g : reduced) product = fp::mul(product, g, p);
  // X^p - X is squarefree, so each distinct root of the product counts once.
  return static_cast<std::uint64_t>(fp::degree(fp::linear_part(product, p)));
}

LocalData local_data_known_prime(const PolyTuple& tuple, std::uint64_t p) {
  LocalData data;
  data.p = p;
  data.rho.reserve(tuple.k());
  for (const auto& f : tuple.polys) data.rho.push_back(rho_known_prime(f, p));
  data.nu = nu_known_prime(tuple, p);
  return data;
}

}  // namespace

std::uint64_t rho_p(const Polynomial& f, std::uint64_t p) {
  require_prime(p);
  return rho_known_prime(f, p);
}

std::uint64_t nu_p(const PolyTuple& tuple, std::uint64_t p) {
  require_prime(p);
  return nu_known_prime(tuple, p);
}

std::vector<std::uint64_t> nu_values(const PolyTuple& tuple,
                                     std::span<const std::uint64_t> primes,
                                     unsigned threads) {
  std::vector<std::uint64_t> out(primes.size());
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (primes.size() + kBlock - 1) / kBlock;
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t end = std::min(primes.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) out[i] = nu_known_prime(tuple, primes[i]);
  });
  return out;
}

std::vector<std::uint64_t> roots_mod_p(const Polynomial& f, std::uint64_t p) {
  require_prime(p);
  const fp::Coeffs g = fp::reduce(f.coefficients(), p);
  std::vector<std::uint64_t> roots;
  if (g.empty()) {
    if (p > kExhaustiveRootLimit)
      throw DomainError("polynomial vanishes identically modulo a large prime");
    for (std::uint64_t n = 0; n < p; ++n) roots.push_back(n);
    return roots;
  }
  if (fp::degree(g) == 0) return roots;
  if (fp::degree(g) == 1) return {linear_root(g, p)};
  if (p < kExhaustiveRootLimit) {
    for (std::uint64_t n = 0; n < p; ++n)
      if (fp::eval(g, n, p) == 0) roots.push_back(n);
    return roots;
  }
  return fp::split_roots(g, p);
}

LocalData local_data(const PolyTuple& tuple, std::uint64_t p, bool with_roots) {
  require_prime(p);
  LocalData data = local_data_known_prime(tuple, p);
  if (with_roots) {
    std::vector<std::vector<std::uint64_t>> roots;
    for (const auto& f : tuple.polys) roots.push_back(roots_mod_p(f, p));
    data.roots = std::move(roots);
  }
  return data;
}

std::vector<LocalData> local_data_table(const PolyTuple& tuple, std::uint64_t bound,
                                        unsigned threads) {
  const auto table = shared_primes(bound);
  const auto primes = table->up_to(static_cast<double>(bound));
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (primes.size() + kBlock - 1) / kBlock;
  std::vector<std::vector<LocalData>> parts(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t end = std::min(primes.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) parts[b].push_back(local_data_known_prime(tuple, primes[i]));
  });
  std::vector<LocalData> rows;
  rows.reserve(primes.size());
  for (auto& part : parts)
    for (auto& row : part) rows.push_back(std::move(row));
  return rows;
}

DisjointnessReport disjointness_trend(const PolyTuple& tuple, std::uint64_t bound) {
  DisjointnessReport report;
  report.bound = bound;
  for (const auto& row : local_data_table(tuple, bound)) {
    std::uint64_t sum = 0;
    for (auto r : row.rho) sum += r;
    if (row.nu != sum) report.violations.push_back(row.p);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Cache

LocalDataCache::LocalDataCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path LocalDataCache::file_for(const PolyTuple& tuple) const {
  return dir_ / (tuple.hash() + ".local");
}

std::optional<std::vector<LocalData>> LocalDataCache::load(const PolyTuple& tuple,
                                                           std::uint64_t bound) const {
  std::shared_lock lock(mutex_);
  std::ifstream in(file_for(tuple));
  if (!in) return std::nullopt;
  std::string header;
  std::getline(in, header);
  std::istringstream parse(header);
  std::string hash_mark, name, ver, file_hash, k_text, bound_text;
  parse >> hash_mark >> name >> ver >> file_hash >> k_text >> bound_text;
  if (hash_mark != "#" || name != "localdata" || ver != "v1" || file_hash != tuple.hash() ||
      k_text != "k=" + std::to_string(tuple.k()) || bound_text.rfind("bound=", 0) != 0)
    return std::nullopt;
  const std::uint64_t file_bound = std::stoull(bound_text.substr(6));
  if (file_bound < bound) return std::nullopt;

  std::vector<LocalData> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::uint64_t> fields;
    std::stringstream ls(line);
    std::string item;
    while (std::getline(ls, item, ',')) fields.push_back(std::stoull(item));
    if (fields.size() != tuple.k() + 2) throw ParseError("malformed local-data row: " + line);
    if (fields[0] > bound) break;
    LocalData row;
    row.p = fields[0];
    row.rho.assign(fields.begin() + 1, fields.end() - 1);
    row.nu = fields.back();
    rows.push_back(std::move(row));
  }
  return rows;
}

void LocalDataCache::store(const PolyTuple& tuple, std::uint64_t bound,
                           std::span<const LocalData> rows) const {
  std::unique_lock lock(mutex_);
  std::filesystem::create_directories(dir_);
  const auto path = file_for(tuple);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("cannot write local-data cache " + tmp);
    out << "# localdata v1 " << tuple.hash() << " k=" << tuple.k() << " bound=" << bound << '\n';
    for (const auto& row : rows) {
      out << row.p;
      for (auto r : row.rho) out << ',' << r;
      out << ',' << row.nu << '\n';
    }
    if (!out) throw Error("failed writing local-data cache " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::vector<LocalData> LocalDataCache::get_or_compute(const PolyTuple& tuple,
                                                      std::uint64_t bound,
                                                      unsigned threads) const {
  if (auto cached = load(tuple, bound)) return std::move(*cached);
  auto rows = local_data_table(tuple, bound, threads);
  store(tuple, bound, rows);
  return rows;
}

void LocalDataCache::clear() const {
  std::unique_lock lock(mutex_);
  if (!std::filesystem::exists(dir_)) return;
  for (const auto& entry : std::filesystem::directory_iterator(dir_))
    if (entry.path().extension() == ".local") std::filesystem::remove(entry.path());
}

}  // namespace bhlab
