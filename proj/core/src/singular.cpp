#include "bhlab/singular.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <type_traits>

#include "bhlab/errors.hpp"
#include "bhlab/quadrature.hpp"
#include "bhlab/sieve.hpp"
#include "bhlab/thresholds.hpp"

namespace bhlab {

namespace {

constexpr std::size_t kChunk = std::size_t{1} << 18;

template <class Real>
std::string render(const Real& v, int digits) {
  std::ostringstream out;
  out << std::setprecision(digits) << v;
  return out.str();
}

// Feeds nu_p for every prime p <= cutoff, in ascending order, to `sink`.
template <class Sink>
void for_each_nu(const PolyTuple& tuple, std::uint64_t cutoff, const SingularOptions& options,
                 Sink&& sink) {
  const auto table = shared_primes(cutoff);
  const auto primes = table->up_to(static_cast<double>(cutoff));
  std::size_t start = 0;
  if (options.cache != nullptr) {
    const std::uint64_t bound = std::min(cutoff, LocalDataCache::kMaxCachedPrime);
    for (const auto& row : options.cache->get_or_compute(tuple, bound, options.threads)) {
      sink(row.p, row.nu);
      ++start;
    }
  }
  while (start < primes.size()) {
    const std::size_t len = std::min(kChunk, primes.size() - start);
    const auto chunk = primes.subspan(start, len);
    const auto nus = nu_values(tuple, chunk, options.threads);
    for (std::size_t i = 0; i < len; ++i) sink(chunk[i], nus[i]);
    start += len;
  }
}

template <class Real>
SingularSeriesEstimate estimate(const PolyTuple& tuple, std::uint64_t cutoff,
                                const SingularOptions& options, int digits) {
  using std::log;
  using std::exp;
  using std::pow;
  const auto k = static_cast<int>(tuple.k());
  Real direct = 1;
  Real product = 1;
  for_each_nu(tuple, cutoff, options, [&](std::uint64_t p, std::uint64_t nu) {
    const Real pr = static_cast<Real>(p);
    // (1 - nu/p)(1 - 1/p)^-k written so that nu = k = 1 gives exactly 1.
    Real factor = static_cast<Real>(p - nu) / (pr - 1);
    if (k > 1) factor *= pow(pr / (pr - 1), k - 1);
    direct *= factor;
    product *= static_cast<Real>(p - nu) / pr;
  });
  Real gamma = static_cast<Real>(kEulerGamma);
  if constexpr (!std::is_same_v<Real, double>)
    gamma = boost::math::constants::euler<Real>();
  const Real logP = log(static_cast<Real>(cutoff));
  const Real mertens = exp(gamma * k) * pow(logP, k) * product;

  SingularSeriesEstimate out;
  out.cutoff = cutoff;
  out.direct = static_cast<double>(direct);
  out.mertens = static_cast<double>(mertens);
  out.value = out.mertens;
  const Real spread = direct > mertens ? Real(direct - mertens) : Real(mertens - direct);
  out.spread = static_cast<double>(spread);
  out.direct_text = render(direct, digits);
  out.mertens_text = render(mertens, digits);
  return out;
}

}  // namespace

double theta(double z) {
  if (z < 2) return 1.0;
  const auto table = shared_primes(static_cast<std::uint64_t>(z));
  double product = 1.0;
  for (auto p : table->up_to(z)) product *= 1.0 - 1.0 / static_cast<double>(p);
  return product;
}

double v_H(std::span<const std::int64_t> shifts, double z) {
  if (shifts.empty()) throw DomainError("v_H needs a nonempty shift set");
  if (z < 2) return 1.0;
  const auto table = shared_primes(static_cast<std::uint64_t>(z));
  std::vector<std::int64_t> classes;
  double product = 1.0;
  for (auto p : table->up_to(z)) {
    const auto q = static_cast<std::int64_t>(p);
    classes.clear();
    for (auto h : shifts) classes.push_back(((h % q) + q) % q);
    std::sort(classes.begin(), classes.end());
    const auto distinct = std::unique(classes.begin(), classes.end()) - classes.begin();
    product *= 1.0 - static_cast<double>(distinct) / static_cast<double>(p);
    if (product == 0.0) break;
  }
  return product;
}

void check_admissible(const PolyTuple& tuple) {
  const auto bound = static_cast<std::uint64_t>(std::max(2, tuple.total_degree()));
  const auto table = shared_primes(bound);
  for (auto p : table->up_to(static_cast<double>(bound)))
    if (nu_p(tuple, p) == p) throw Inadmissible(p);
}

SingularSeriesEstimate singular_series(const PolyTuple& tuple, std::uint64_t cutoff,
                                       const SingularOptions& options) {
  if (cutoff < 2) throw DomainError("singular series cutoff must be at least 2");
  check_admissible(tuple);
  if (options.precision == Precision::extended)
    return estimate<ExtendedReal>(tuple, cutoff, options, 40);
  return estimate<double>(tuple, cutoff, options, 17);
}

double main_term_integrand(const PolyTuple& tuple, double u) {
  double denom = 1.0;
  for (const auto& f : tuple.polys) {
    const double v = f.evaluate_real(u);
    if (!(v > 1.0)) throw DomainError("f_j(u) <= 1 inside the integration range");
    denom *= std::log(v);
  }
  return 1.0 / denom;
}

double main_term(const PolyTuple& tuple, double S, double x, std::optional<double> y) {
  if (!(x >= 2)) throw DomainError("main term needs x >= 2");
  auto g = [&](double u) { return main_term_integrand(tuple, u); };
  if (y) {
    if (!(*y > 0)) throw DomainError("main term window needs y > 0");
    return S * integrate(g, x, x + *y).value;
  }
  if (x == 2) return 0.0;
  return S * integrate(g, 2.0, x).value;
}

std::vector<ConvergenceRow> lemma21_convergence(const Polynomial& f,
                                                std::span<const std::uint64_t> checkpoints,
                                                unsigned threads) {
  std::vector<std::uint64_t> xs(checkpoints.begin(), checkpoints.end());
  std::sort(xs.begin(), xs.end());
  std::vector<ConvergenceRow> rows;
  if (xs.empty()) return rows;
  const PolyTuple single{{f}, 0};
  const auto table = shared_primes(std::max<std::uint64_t>(xs.back(), 2));
  const auto primes = table->up_to(static_cast<double>(xs.back()));
  const auto rho = nu_values(single, primes, threads);

  double product = 1.0;
  std::size_t i = 0;
  for (auto x : xs) {
    for (; i < primes.size() && primes[i] <= x; ++i)
      product *= 1.0 - static_cast<double>(rho[i]) / static_cast<double>(primes[i]);
    ConvergenceRow row;
    row.x = x;
    row.value = x >= 2 ? std::exp(kEulerGamma) * std::log(static_cast<double>(x)) * product : 0.0;
    row.difference = rows.empty() ? 0.0 : row.value - rows.back().value;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bhlab
