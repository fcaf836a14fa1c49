#include "bhlab/modpoly.hpp"

#include <algorithm>
#include <functional>

#include "bhlab/errors.hpp"
#include "bhlab/rng.hpp"

namespace bhlab::fp {

std::uint64_t pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) noexcept {
  std::uint64_t result = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) result = mul(result, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return result;
}

std::uint64_t inverse(std::uint64_t a, std::uint64_t p) {
  __int128 t = 0, new_t = 1;
  __int128 r = p, new_r = a % p;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw DomainError("element is not invertible");
  if (t < 0) t += p;
  return static_cast<std::uint64_t>(t);
}

void trim(Coeffs& a) noexcept {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Coeffs reduce(const IntCoeffs& f, std::uint64_t p) {
  Coeffs out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = mpz_fdiv_ui(f[i].get_mpz_t(), p);
  trim(out);
  return out;
}

std::uint64_t eval(const Coeffs& a, std::uint64_t x, std::uint64_t p) noexcept {
  std::uint64_t acc = 0;
  for (std::size_t i = a.size(); i-- > 0;) acc = add(mul(acc, x, p), a[i], p);
  return acc;
}

Coeffs add(const Coeffs& a, const Coeffs& b, std::uint64_t p) {
  Coeffs out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = fp::add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0, p);
  trim(out);
  return out;
}

Coeffs sub(const Coeffs& a, const Coeffs& b, std::uint64_t p) {
  Coeffs out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = fp::sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0, p);
  trim(out);
  return out;
}

Coeffs mul(const Coeffs& a, const Coeffs& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Coeffs out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = fp::add(out[i + j], fp::mul(a[i], b[j], p), p);
  }
  trim(out);
  return out;
}

std::pair<Coeffs, Coeffs> divmod(const Coeffs& a, const Coeffs& b, std::uint64_t p) {
  if (b.empty()) throw DomainError("polynomial division by zero");
  if (a.size() < b.size()) return {Coeffs{}, a};
  Coeffs r = a;
  Coeffs q(a.size() - b.size() + 1, 0);
  const std::uint64_t lead_inv = inverse(b.back(), p);
  for (std::size_t i = q.size(); i-- > 0;) {
    const std::uint64_t c = fp::mul(r[i + b.size() - 1], lead_inv, p);
    q[i] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = fp::sub(r[i + j], fp::mul(c, b[j], p), p);
  }
  trim(q);
  trim(r);
  return {std::move(q), std::move(r)};
}

Coeffs rem(const Coeffs& a, const Coeffs& m, std::uint64_t p) {
  return divmod(a, m, p).second;
}

Coeffs mulmod(const Coeffs& a, const Coeffs& b, const Coeffs& m, std::uint64_t p) {
  return rem(mul(a, b, p), m, p);
}

Coeffs powmod(const Coeffs& base, std::uint64_t e, const Coeffs& m, std::uint64_t p) {
  Coeffs result = rem(Coeffs{1 % p}, m, p);
  Coeffs b = rem(base, m, p);
  while (e) {
    if (e & 1) result = mulmod(result, b, m, p);
    e >>= 1;
    if (e) b = mulmod(b, b, m, p);
  }
  return result;
}

Coeffs make_monic(Coeffs a, std::uint64_t p) {
  if (a.empty() || a.back() == 1) return a;
  const std::uint64_t inv = inverse(a.back(), p);
  for (auto& c : a) c = fp::mul(c, inv, p);
  return a;
}

Coeffs gcd(Coeffs a, Coeffs b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Coeffs r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(std::move(a), p);
}

Coeffs linear_part(const Coeffs& f, std::uint64_t p) {
  if (degree(f) < 1) throw DomainError("linear_part needs a non-constant polynomial");
  const Coeffs xp = powmod(x_poly(), p, f, p);
  return gcd(sub(xp, rem(x_poly(), f, p), p), f, p);
}

namespace {

constexpr std::uint64_t kSplitSeed = stream_tag("equal-degree-split");

void split_into(const Coeffs& g, std::uint64_t p, Xoshiro256pp& gen,
                std::vector<std::uint64_t>& roots) {
  const int d = degree(g);
  if (d <= 0) return;
  if (d == 1) {
    // monic: X + g0 → root -g0
    roots.push_back(g[0] == 0 ? 0 : p - g[0]);
    return;
  }
  for (;;) {
    const std::uint64_t a = uniform_below(gen, p);
    Coeffs shifted{a, 1};
    Coeffs h = powmod(shifted, (p - 1) / 2, g, p);
    h = sub(h, Coeffs{1}, p);
    Coeffs factor = gcd(h, g, p);
    const int fd = degree(factor);
    if (fd > 0 && fd < d) {
      split_into(factor, p, gen, roots);
      split_into(divmod(g, factor, p).first, p, gen, roots);
      return;
    }
  }
}

}  // namespace

std::vector<std::uint64_t> split_roots(const Coeffs& f, std::uint64_t p) {
  if (f.empty()) throw DomainError("split_roots of the zero polynomial");
  if (degree(f) == 0) return {};
  std::vector<std::uint64_t> roots;
  if (p == 2) {
    for (std::uint64_t x = 0; x < 2; ++x)
      if (eval(f, x, p) == 0) roots.push_back(x);
    return roots;
  }
  Coeffs g = make_monic(linear_part(f, p), p);
  Xoshiro256pp gen(splitmix64(kSplitSeed ^ p));
  split_into(g, p, gen, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

bool is_irreducible(const Coeffs& f_in, std::uint64_t p) {
  Coeffs f = f_in;
  trim(f);
  const int d = degree(f);
  if (d < 1) return false;
  if (d == 1) return true;
  f = make_monic(std::move(f), p);
  Coeffs h = rem(x_poly(), f, p);
  for (int i = 1; i <= d / 2; ++i) {
    h = powmod(h, p, f, p);
    if (degree(gcd(sub(h, x_poly(), p), f, p)) > 0) return false;
  }
  return true;
}

}  // namespace bhlab::fp
