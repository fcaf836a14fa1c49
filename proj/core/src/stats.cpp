#include "bhlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "bhlab/errors.hpp"
#include "bhlab/localroots.hpp"
#include "bhlab/parallel.hpp"
#include "bhlab/rng.hpp"
#include "bhlab/sieve.hpp"
#include "bhlab/singular.hpp"

namespace bhlab {

namespace {

std::uint64_t value_u64(const Polynomial& f, std::uint64_t n) {
  const auto v = f.evaluate_u64(n);
  if (!v) throw RangeTooLarge("polynomial value exceeds 64 bits");
  return *v;
}

bool divisible(const mpz_class& v, std::uint64_t p) {
  return mpz_divisible_ui_p(v.get_mpz_t(), p) != 0;
}

std::uint64_t residue(const mpz_class& v, std::uint64_t p) {
  return mpz_fdiv_ui(v.get_mpz_t(), p);
}

bool value_has_small_factor(const mpz_class& v, double t) {
  if (mpz_fits_ulong_p(v.get_mpz_t())) return has_small_factor(v.get_ui(), t);
  if (t < 2) return false;
  const auto table = shared_primes(static_cast<std::uint64_t>(t));
  for (auto p : table->up_to(t))
    if (divisible(v, p)) return true;
  return false;
}

template <class Accumulate>
void for_each_sieving_prime(const std::vector<mpz_class>& values, const SievingRule& rule,
                            Accumulate&& acc) {
  double vmax = 0;
  std::vector<double> reals;
  reals.reserve(values.size());
  for (const auto& v : values) {
    reals.push_back(as_real(v));
    vmax = std::max(vmax, reals.back());
  }
  std::vector<std::uint64_t> classes;
  for (auto p : rule.candidates(vmax)) {
    classes.clear();
    for (std::size_t i = 0; i < values.size(); ++i)
      if (rule.active(p, reals[i])) classes.push_back(residue(values[i], p));
    if (classes.empty()) continue;
    std::sort(classes.begin(), classes.end());
    const auto c = static_cast<std::uint64_t>(
        std::unique(classes.begin(), classes.end()) - classes.begin());
    acc(p, c);
  }
}

std::string hex16(std::uint64_t h) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

}  // namespace

double as_real(const mpz_class& v) {
  if (mpz_fits_ulong_p(v.get_mpz_t())) return static_cast<double>(v.get_ui());
  return v.get_d();
}

std::vector<mpz_class> tuple_values(const PolyTuple& tuple, std::uint64_t n) {
  std::vector<mpz_class> values;
  values.reserve(tuple.k());
  const mpz_class arg(static_cast<unsigned long>(n));
  for (const auto& f : tuple.polys) values.push_back(f(arg));
  return values;
}

SievingRule SievingRule::from_profile(const ThresholdProfile& profile) {
  SievingRule rule;
  rule.profile = profile;
  return rule;
}

SievingRule SievingRule::toy(std::vector<std::uint64_t> primes) {
  if (primes.empty()) throw DomainError("toy prime set is empty");
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (auto p : primes)
    if (!is_prime(p)) throw NotPrime(p);
  SievingRule rule;
  rule.toy_primes = std::move(primes);
  return rule;
}

SievingRule SievingRule::for_model(const ModelSpec& spec) {
  if (spec.bernoulli())
    throw KindMismatch(to_string(spec.kind) + " has no residue sieve");
  return from_profile(spec.effective_profile());
}

bool SievingRule::active(std::uint64_t p, double value) const {
  if (is_toy()) return std::binary_search(toy_primes.begin(), toy_primes.end(), p);
  const double pr = static_cast<double>(p);
  return pr > profile.t(value) && pr <= profile.z(value);
}

std::vector<std::uint64_t> SievingRule::candidates(double max_value) const {
  if (is_toy()) return toy_primes;
  const double z = profile.z(max_value);
  if (z < 2) return {};
  const auto table = shared_primes(static_cast<std::uint64_t>(z));
  const auto span = table->up_to(z);
  return {span.begin(), span.end()};
}

std::uint64_t count_window(const MembershipSource& source, const PolyTuple& tuple,
                           std::uint64_t lo, std::uint64_t hi, const HitOptions& options) {
  lo = std::max(lo, source.n_min());
  if (hi < lo) return 0;
  std::uint64_t vlo = value_u64(tuple[0], lo);
  std::uint64_t vhi = 0;
  for (const auto& f : tuple.polys) {
    vlo = std::min(vlo, value_u64(f, lo));
    vhi = std::max(vhi, value_u64(f, hi));
  }
  std::uint64_t hits = 0;
  if (vhi - vlo < options.budget) {
    const Bitmap bits = source.materialize(vlo, vhi, options.threads, options.budget);
    for (std::uint64_t n = lo; n <= hi; ++n) {
      bool all = true;
      for (const auto& f : tuple.polys)
        if (!bits.test(*f.evaluate_u64(n))) {
          all = false;
          break;
        }
      hits += all;
    }
    return hits;
  }
  for (std::uint64_t n = lo; n <= hi; ++n) {
    bool all = true;
    for (const auto& f : tuple.polys)
      if (!source.member(*f.evaluate_u64(n))) {
        all = false;
        break;
      }
    hits += all;
  }
  return hits;
}

std::uint64_t count_hits(const MembershipSource& source, const PolyTuple& tuple,
                         std::uint64_t x, const HitOptions& options) {
  return count_window(source, tuple, source.n_min(), x, options);
}

HitSeries hit_series(const MembershipSource& source, const PolyTuple& tuple,
                     std::span<const std::uint64_t> checkpoints, double S,
                     const HitOptions& options) {
  std::vector<std::uint64_t> xs(checkpoints.begin(), checkpoints.end());
  std::sort(xs.begin(), xs.end());
  HitSeries series{tuple.hash(), source.describe(), {}};
  std::uint64_t previous = 0;
  std::uint64_t running = 0;
  for (auto x : xs) {
    // each step counts only the new stretch (previous, x]
    if (x > previous) running += count_window(source, tuple, previous + 1, x, options);
    previous = std::max(previous, x);
    HitRow row;
    row.x = x;
    row.count = running;
    row.M = x >= 2 ? main_term(tuple, S, static_cast<double>(x)) : 0.0;
    row.delta = static_cast<double>(row.count) - row.M;
    series.rows.push_back(row);
  }
  return series;
}

bool deterministic_part(const PolyTuple& tuple, std::uint64_t n,
                        const ThresholdProfile& profile) {
  for (const auto& v : tuple_values(tuple, n))
    if (value_has_small_factor(v, profile.t(as_real(v)))) return false;
  return true;
}

Bitmap deterministic_block(const PolyTuple& tuple, std::uint64_t v, std::uint64_t w,
                           const ThresholdProfile& profile) {
  if (w == 0) throw DomainError("empty block");
  const std::uint64_t lo = v + 1, hi = v + w;
  Bitmap bits(lo, hi, true);
  for (const auto& f : tuple.polys) {
    auto t_at = [&](std::uint64_t n) {
      return profile.t(as_real(f(mpz_class(static_cast<unsigned long>(n)))));
    };
    const double tmax = t_at(hi);
    if (tmax < 2) continue;
    const auto table = shared_primes(static_cast<std::uint64_t>(tmax));
    for (auto p : table->up_to(tmax)) {
      const double pr = static_cast<double>(p);
      const std::uint64_t from = first_true(lo, hi, [&](std::uint64_t n) { return pr <= t_at(n); });
      if (from > hi) continue;
      for (auto r : roots_mod_p(f, p)) {
        const std::uint64_t base = from - from % p + r;
        for (std::uint64_t n = base >= from ? base : base + p; n <= hi; n += p) bits.reset(n);
      }
    }
  }
  return bits;
}

bool random_part(const SetInstance& instance, const PolyTuple& tuple, std::uint64_t n) {
  const SievingRule rule = SievingRule::for_model(instance.spec());
  const auto values = tuple_values(tuple, n);
  double vmax = 0;
  for (const auto& v : values) vmax = std::max(vmax, as_real(v));
  for (auto p : rule.candidates(vmax)) {
    std::uint64_t a = 0;
    bool drawn = false;
    for (const auto& v : values) {
      if (!rule.active(p, as_real(v))) continue;
      if (!drawn) {
        a = residue_for_prime(instance.spec().seed, p);
        drawn = true;
      }
      if (residue(v, p) == a) return false;
    }
  }
  return true;
}

bool in_degenerate_set(const PolyTuple& tuple, std::uint64_t n1, std::uint64_t n2) {
  const auto a = tuple_values(tuple, n1);
  const auto b = tuple_values(tuple, n2);
  for (const auto& u : a)
    for (const auto& v : b)
      if (u == v) return true;
  return false;
}

mpq_class expected_Rn_exact(const PolyTuple& tuple, std::uint64_t n, const SievingRule& rule) {
  mpq_class product = 1;
  for_each_sieving_prime(tuple_values(tuple, n), rule, [&](std::uint64_t p, std::uint64_t c) {
    mpq_class factor(mpz_class(static_cast<unsigned long>(p - c)),
                     mpz_class(static_cast<unsigned long>(p)));
    factor.canonicalize();
    product *= factor;
  });
  return product;
}

double expected_Rn(const PolyTuple& tuple, std::uint64_t n, const SievingRule& rule) {
  double product = 1;
  for_each_sieving_prime(tuple_values(tuple, n), rule, [&](std::uint64_t p, std::uint64_t c) {
    product *= 1.0 - static_cast<double>(c) / static_cast<double>(p);
  });
  return product;
}

mpq_class expected_pair_exact(const PolyTuple& tuple, std::uint64_t n1, std::uint64_t n2,
                              const SievingRule& rule) {
  auto values = tuple_values(tuple, n1);
  for (auto& v : tuple_values(tuple, n2)) values.push_back(std::move(v));
  mpq_class product = 1;
  for_each_sieving_prime(values, rule, [&](std::uint64_t p, std::uint64_t c) {
    mpq_class factor(mpz_class(static_cast<unsigned long>(p - c)),
                     mpz_class(static_cast<unsigned long>(p)));
    factor.canonicalize();
    product *= factor;
  });
  return product;
}

mpq_class expected_pair_bruteforce(const PolyTuple& tuple, std::uint64_t n1, std::uint64_t n2,
                                   std::span<const std::uint64_t> toy_primes) {
  auto values = tuple_values(tuple, n1);
  for (auto& v : tuple_values(tuple, n2)) values.push_back(std::move(v));
  // residues[i][j]: value j reduced mod prime i
  std::vector<std::vector<std::uint64_t>> residues;
  mpz_class cases = 1;
  for (auto p : toy_primes) {
    std::vector<std::uint64_t> row;
    for (const auto& v : values) row.push_back(residue(v, p));
    residues.push_back(std::move(row));
    cases *= static_cast<unsigned long>(p);
  }
  std::vector<std::uint64_t> a(toy_primes.size(), 0);
  mpz_class survivors = 0;
  for (;;) {
    bool alive = true;
    for (std::size_t i = 0; i < a.size() && alive; ++i)
      for (auto r : residues[i])
        if (r == a[i]) {
          alive = false;
          break;
        }
    if (alive) ++survivors;
    std::size_t i = 0;
    while (i < a.size() && ++a[i] == toy_primes[i]) a[i++] = 0;
    if (i == a.size()) break;
  }
  mpq_class out(survivors, cases);
  out.canonicalize();
  return out;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t i) noexcept {
  return splitmix64(master ^ i);
}

double exact_window_mean(const ModelSpec& spec, const PolyTuple& tuple, std::uint64_t x,
                         std::uint64_t y) {
  const SetInstance scratch(spec);
  std::optional<SievingRule> rule;
  if (!spec.bernoulli()) rule = SievingRule::for_model(spec);
  const ThresholdProfile profile = spec.effective_profile();
  double total = 0;
  for (std::uint64_t n = std::max(x + 1, spec.n_min()); n <= x + y; ++n) {
    const auto values = tuple_values(tuple, n);
    bool below = false;
    for (const auto& v : values) below = below || v < spec.n_min();
    if (below) continue;
    if (spec.bernoulli()) {
      double q = 1;
      for (const auto& v : values) {
        if (!mpz_fits_ulong_p(v.get_mpz_t())) throw RangeTooLarge("value exceeds 64 bits");
        q *= scratch.include_probability(v.get_ui());
        if (q == 0) break;
      }
      total += q;
    } else if (deterministic_part(tuple, n, profile)) {
      total += expected_Rn(tuple, n, *rule);
    }
  }
  return total;
}

TrialSummary monte_carlo(const ModelSpec& spec, const PolyTuple& tuple, std::uint64_t x,
                         std::uint64_t y, std::uint64_t trials,
                         const MonteCarloOptions& options) {
  if (trials < 2) throw DomainError("monte carlo needs at least 2 trials");
  if (!(static_cast<double>(y) > std::sqrt(static_cast<double>(x))) || y > x)
    throw DomainError("monte carlo needs sqrt(x) < y <= x");

  TrialSummary out;
  out.spec = spec;
  out.tuple_hash = tuple.hash();
  out.x = x;
  out.y = y;
  out.trials = trials;
  out.counts.assign(trials, 0);
  std::vector<std::uint64_t> clamps(trials, 0);

  const HitOptions hit{1, options.budget};
  parallel_for(trials, options.threads, [&](std::size_t i) {
    ModelSpec trial = spec;
    trial.seed = trial_seed(spec.seed, i);
    const SetInstance instance(trial);
    out.counts[i] = count_window(instance, tuple, x + 1, x + y, hit);
    clamps[i] = instance.clamp_count();
  });

  double sum = 0;
  for (auto c : out.counts) sum += static_cast<double>(c);
  out.mean = sum / static_cast<double>(trials);
  double sq = 0;
  for (auto c : out.counts) {
    const double d = static_cast<double>(c) - out.mean;
    sq += d * d;
  }
  out.variance = sq / static_cast<double>(trials - 1);
  for (auto c : clamps) out.clamp_count += c;

  out.exact_mean = exact_window_mean(spec, tuple, x, y);
  if (options.singular) {
    out.singular = *options.singular;
  } else {
    SingularOptions so;
    so.threads = options.threads;
    out.singular = singular_series(tuple, options.cutoff, so).value;
  }
  out.M = main_term(tuple, out.singular, static_cast<double>(x), static_cast<double>(y));
  out.var_over_M2 = out.variance / (out.M * out.M);

  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const std::uint64_t s = trial_seed(spec.seed, i);
    for (int b = 0; b < 8; ++b) {
      h ^= (s >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  out.seeds_hash = hex16(h);
  return out;
}

std::uint64_t BlockSequence::count_in(double lo, double hi) const {
  std::uint64_t c = 0;
  for (const auto& pt : points) c += pt.x > lo && pt.x <= hi;
  return c;
}

BlockSequence block_sequence(double K0, double x_max) {
  if (!(K0 >= 10)) throw DomainError("block sequence needs K0 >= 10");
  if (!(x_max > K0)) throw DomainError("block sequence needs x_max > K0");
  BlockSequence seq;
  seq.K0 = K0;
  for (double x = K0; x <= x_max;) {
    const double delta = x * std::exp(-std::cbrt(std::log(x)));
    seq.points.push_back({x, delta});
    x += delta;
  }
  for (double X = K0; 2 * X <= x_max; X *= 2) seq.dyadic.push_back({X, seq.count_in(X, 2 * X)});
  return seq;
}

}  // namespace bhlab
