#include "bhlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bhlab/errors.hpp"
#include "bhlab/parallel.hpp"
#include "bhlab/rng.hpp"
#include "bhlab/sieve.hpp"

namespace bhlab {

namespace {

std::uint64_t draw_residue(std::uint64_t seed, std::uint64_t p) {
  auto gen = counter_stream(seed, kResidueTag, p);
  return uniform_below(gen, p);
}

bool draw_bernoulli(std::uint64_t seed, std::uint64_t m, double q) {
  if (q <= 0.0) return false;
  auto gen = counter_stream(seed, kBernoulliTag, m);
  return bernoulli_accept(gen(), q);
}

void check_budget(std::uint64_t lo, std::uint64_t hi, std::uint64_t budget) {
  if (hi < lo) throw DomainError("empty range");
  if (hi - lo >= budget) {
    std::ostringstream msg;
    msg << "range [" << lo << ", " << hi << "] exceeds the bitmap budget of " << budget
        << " bits";
    throw RangeTooLarge(msg.str());
  }
}

template <class Fn>
void for_each_segment(std::uint64_t lo, std::uint64_t hi, unsigned threads, Fn&& fn) {
  const std::uint64_t segments = (hi - lo) / kSegmentSize + 1;
  parallel_for(segments, threads, [&](std::size_t s) {
    const std::uint64_t a = lo + s * kSegmentSize;
    const std::uint64_t b = std::min(hi, a + (kSegmentSize - 1));
    fn(a, b);
  });
}

std::uint64_t first_multiple(std::uint64_t a, std::uint64_t p, std::uint64_t r) {
  // smallest m >= a with m = r (mod p)
  const std::uint64_t base = a - a % p + r;
  return base >= a ? base : base + p;
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::cramer: return "cramer";
    case ModelKind::granville: return "granville";
    case ModelKind::m1: return "m1";
    case ModelKind::m2: return "m2";
    case ModelKind::bft_r: return "bft_r";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  for (auto kind : {ModelKind::cramer, ModelKind::granville, ModelKind::m1, ModelKind::m2,
                    ModelKind::bft_r})
    if (to_string(kind) == name) return kind;
  throw ParseError("unknown model kind '" + std::string(name) + "'");
}

std::uint64_t ModelSpec::n_min() const noexcept {
  switch (kind) {
    case ModelKind::cramer:
    case ModelKind::granville: return 3;
    case ModelKind::m1:
    case ModelKind::m2: return 10;
    case ModelKind::bft_r: return 8;
  }
  return 0;
}

bool ModelSpec::bernoulli() const noexcept {
  return kind == ModelKind::cramer || kind == ModelKind::granville || kind == ModelKind::m1;
}

ThresholdProfile ModelSpec::effective_profile() const {
  ThresholdProfile p = profile;
  if (kind == ModelKind::bft_r) {
    p.t_kind = ThresholdProfile::TKind::fixed;
    p.t_param = 1;
  }
  return p;
}

std::string ModelSpec::describe() const {
  std::ostringstream out;
  out << to_string(kind) << "(seed=" << seed;
  switch (kind) {
    case ModelKind::cramer: break;
    case ModelKind::granville: out << ", y=" << granville_y; break;
    case ModelKind::m1: out << ", t=" << profile.t_text(); break;
    case ModelKind::m2: out << ", t=" << profile.t_text() << ", z=" << profile.z_text(); break;
    case ModelKind::bft_r: out << ", z=" << profile.z_text(); break;
  }
  out << ')';
  return out.str();
}

std::uint64_t residue_for_prime(std::uint64_t seed, std::uint64_t p) {
  if (!is_prime(p)) throw NotPrime(p);
  return draw_residue(seed, p);
}

bool PrimeOracle::member(std::uint64_t m) const { return is_prime(m); }

Bitmap PrimeOracle::materialize(std::uint64_t lo, std::uint64_t hi, unsigned threads,
                                std::uint64_t budget) const {
  check_budget(lo, hi, budget);
  return prime_bitmap(lo, hi, threads);
}

SetInstance::SetInstance(ModelSpec spec)
    : spec_(std::move(spec)), profile_(spec_.effective_profile()) {
  profile_.validate();
  if (spec_.kind == ModelKind::granville && !(spec_.granville_y >= 2))
    throw ProfileInvalid("granville y must be >= 2");
}

std::shared_ptr<const ThetaTable> SetInstance::theta_for(double t) const {
  std::lock_guard lock(theta_mutex_);
  const auto need = static_cast<std::uint64_t>(std::max(2.0, t));
  if (!theta_ || theta_->bound() < need)
    theta_ = std::make_shared<const ThetaTable>(
        std::max<std::uint64_t>(need, theta_ ? 2 * theta_->bound() : 1024));
  return theta_;
}

double SetInstance::probability_after_sieve(std::uint64_t n, double t) const {
  const double L = std::log(static_cast<double>(n));
  double q = 0;
  switch (spec_.kind) {
    case ModelKind::cramer: q = 1.0 / L; break;
    case ModelKind::granville: q = 1.0 / ((*theta_for(t))(t) * L); break;
    case ModelKind::m1: q = 1.0 / ((*theta_for(t))(t) * L); break;
    default: throw KindMismatch(to_string(spec_.kind) + " has no inclusion probability");
  }
  if (q > 1.0) {
    if (profile_.clamp == ClampPolicy::reject) {
      std::ostringstream msg;
      msg << "inclusion probability " << q << " > 1 at n = " << n;
      throw ProfileInvalid(msg.str());
    }
    clamps_.fetch_add(1, std::memory_order_relaxed);
    q = 1.0;
  }
  return q;
}

double SetInstance::include_probability(std::uint64_t n) const {
  if (!spec_.bernoulli())
    throw KindMismatch(to_string(spec_.kind) + " has no inclusion probability");
  if (n < n_min()) throw DomainError("n below the model's starting point");
  double t = 0;
  if (spec_.kind == ModelKind::granville) t = spec_.granville_y;
  if (spec_.kind == ModelKind::m1) t = profile_.t(static_cast<double>(n));
  if (spec_.kind != ModelKind::cramer && has_small_factor(n, t)) return 0.0;
  return probability_after_sieve(n, t);
}

bool SetInstance::member(std::uint64_t m) const {
  if (m < n_min()) return false;
  if (spec_.bernoulli()) return draw_bernoulli(spec_.seed, m, include_probability(m));

  const double x = static_cast<double>(m);
  const double t = profile_.t(x);
  const double z = profile_.z(x);
  if (has_small_factor(m, t)) return false;
  if (z < 2) return true;
  const auto table = shared_primes(static_cast<std::uint64_t>(z));
  for (auto p : table->up_to(z)) {
    if (static_cast<double>(p) <= t) continue;
    if (m % p == draw_residue(spec_.seed, p)) return false;
  }
  return true;
}

Bitmap SetInstance::materialize(std::uint64_t lo, std::uint64_t hi, unsigned threads,
                                std::uint64_t budget) const {
  check_budget(lo, hi, budget);
  Bitmap bits = spec_.bernoulli() ? materialize_bernoulli(lo, hi, threads)
                                  : materialize_sieved(lo, hi, threads);
  for (std::uint64_t m = lo; m <= hi && m < n_min(); ++m) bits.reset(m);
  return bits;
}

Bitmap SetInstance::materialize_sieved(std::uint64_t lo, std::uint64_t hi,
                                       unsigned threads) const {
  struct Plan {
    std::uint64_t p, residue, t_from, z_from;
  };
  const std::uint64_t start = std::max<std::uint64_t>(lo, 1);
  const double zmax = profile_.z(static_cast<double>(hi));
  std::vector<Plan> plans;
  if (zmax >= 2) {
    const auto table = shared_primes(static_cast<std::uint64_t>(zmax));
    for (auto p : table->up_to(zmax)) {
      const double pr = static_cast<double>(p);
      Plan plan{p, draw_residue(spec_.seed, p), 0, 0};
      // first m with p <= t(m), and first m with p <= z(m)
      plan.t_from = first_true(start, hi, [&](std::uint64_t m) {
        return pr <= profile_.t(static_cast<double>(m));
      });
      plan.z_from = first_true(start, hi, [&](std::uint64_t m) {
        return pr <= profile_.z(static_cast<double>(m));
      });
      plans.push_back(plan);
    }
  }
  Bitmap bits(lo, hi, true);
  if (lo == 0) bits.reset(0);
  for_each_segment(lo, hi, threads, [&](std::uint64_t a, std::uint64_t b) {
    for (const auto& plan : plans) {
      const std::uint64_t p = plan.p;
      for (std::uint64_t m = first_multiple(std::max(a, plan.t_from), p, 0); m <= b; m += p)
        bits.reset(m);
      const std::uint64_t from = std::max(a, plan.z_from);
      const std::uint64_t to = plan.t_from == 0 ? 0 : std::min(b, plan.t_from - 1);
      if (from > to) continue;
      for (std::uint64_t m = first_multiple(from, p, plan.residue); m <= to; m += p)
        bits.reset(m);
    }
  });
  return bits;
}

Bitmap SetInstance::materialize_bernoulli(std::uint64_t lo, std::uint64_t hi,
                                          unsigned threads) const {
  const std::uint64_t start = std::max<std::uint64_t>(lo, n_min());
  Bitmap bits(lo, hi, false);
  if (start > hi) return bits;

  // Small-factor marks: m is excluded when some p <= t(m) divides it.
  Bitmap marked(lo, hi, false);
  if (spec_.kind == ModelKind::granville) {
    marked = small_factor_marks(lo, hi, spec_.granville_y, threads);
  } else if (spec_.kind == ModelKind::m1) {
    const double tmax = profile_.t(static_cast<double>(hi));
    if (tmax >= 2) {
      const auto table = shared_primes(static_cast<std::uint64_t>(tmax));
      std::vector<std::pair<std::uint64_t, std::uint64_t>> plans;
      for (auto p : table->up_to(tmax)) {
        const double pr = static_cast<double>(p);
        plans.emplace_back(p, first_true(start, hi, [&](std::uint64_t m) {
                             return pr <= profile_.t(static_cast<double>(m));
                           }));
      }
      for_each_segment(lo, hi, threads, [&](std::uint64_t a, std::uint64_t b) {
        for (auto [p, from] : plans)
          for (std::uint64_t m = first_multiple(std::max(a, from), p, 0); m <= b; m += p)
            marked.set(m);
      });
    }
  }
  if (spec_.kind != ModelKind::cramer) {
    // Warm the Theta table before going parallel.
    const double tmax = spec_.kind == ModelKind::granville ? spec_.granville_y
                                                           : profile_.t(static_cast<double>(hi));
    theta_for(tmax);
  }
  // Segments stay aligned to lo so no two workers share a word.
  for_each_segment(lo, hi, threads, [&](std::uint64_t a, std::uint64_t b) {
    for (std::uint64_t m = std::max(a, start); m <= b; ++m) {
      if (marked.test(m)) continue;
      double t = 0;
      if (spec_.kind == ModelKind::granville) t = spec_.granville_y;
      if (spec_.kind == ModelKind::m1) t = profile_.t(static_cast<double>(m));
      if (draw_bernoulli(spec_.seed, m, probability_after_sieve(m, t))) bits.set(m);
    }
  });
  return bits;
}

double include_probability(const ModelSpec& spec, std::uint64_t n) {
  return SetInstance(spec).include_probability(n);
}

}  // namespace bhlab
