#include "bhlab/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>

#include "bhlab/errors.hpp"
#include "bhlab/modpoly.hpp"
#include "bhlab/rng.hpp"
#include "bhlab/sieve.hpp"

namespace bhlab {

void trim(IntCoeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

IntCoeffs multiply(const IntCoeffs& a, const IntCoeffs& b) {
  if (a.empty() || b.empty()) return {};
  IntCoeffs out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

IntCoeffs subtract(const IntCoeffs& a, const IntCoeffs& b) {
  IntCoeffs out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

Polynomial::Polynomial(IntCoeffs ascending) : coeffs_(std::move(ascending)) {
  trim(coeffs_);
  if (coeffs_.size() < 2) throw DomainError("polynomial must have degree >= 1");
  if (coeffs_.back() <= 0) throw DomainError("leading coefficient must be positive");
}

mpz_class Polynomial::operator()(const mpz_class& n) const {
  mpz_class acc = coeffs_.back();
  for (std::size_t i = coeffs_.size() - 1; i-- > 0;) {
    acc *= n;
    acc += coeffs_[i];
  }
  return acc;
}

mpz_class evaluate(const Polynomial& f, const mpz_class& n) { return f(n); }

std::optional<std::uint64_t> Polynomial::evaluate_u64(std::uint64_t n) const {
  // Fast path when every coefficient is a small nonnegative integer.
  using i128 = __int128;
  const i128 cap = static_cast<i128>(1) << 100;
  i128 acc = 0;
  bool fast = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    if (!coeffs_[i].fits_slong_p()) {
      fast = false;
      break;
    }
    if (n != 0 && (acc > cap / static_cast<i128>(n) || acc < -cap / static_cast<i128>(n))) {
      fast = false;
      break;
    }
    acc = acc * static_cast<i128>(n) + coeffs_[i].get_si();
    if (acc > cap || acc < -cap) {
      fast = false;
      break;
    }
  }
  if (!fast) {
    const mpz_class v = (*this)(mpz_class(std::to_string(n)));
    if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) return std::nullopt;
    return static_cast<std::uint64_t>(std::stoull(v.get_str()));
  }
  if (acc < 0 || acc > static_cast<i128>(UINT64_MAX)) return std::nullopt;
  return static_cast<std::uint64_t>(acc);
}

double Polynomial::evaluate_real(double u) const {
  double acc = coeffs_.back().get_d();
  for (std::size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * u + coeffs_[i].get_d();
  return acc;
}

Polynomial Polynomial::shifted(const mpz_class& N) const {
  // Taylor shift by Horner over polynomials: acc = acc * (X + N) + c_i.
  IntCoeffs acc{coeffs_.back()};
  for (std::size_t i = coeffs_.size() - 1; i-- > 0;) {
    IntCoeffs next(acc.size() + 1, 0);
    for (std::size_t j = 0; j < acc.size(); ++j) {
      next[j + 1] += acc[j];
      next[j] += acc[j] * N;
    }
    next[0] += coeffs_[i];
    acc = std::move(next);
  }
  return Polynomial(std::move(acc));
}

std::string Polynomial::to_string() const {
  std::string out;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const mpz_class& c = coeffs_[i];
    if (c == 0) continue;
    const mpz_class mag = abs(c);
    if (c < 0)
      out += '-';
    else if (!out.empty())
      out += '+';
    if (i == 0 || mag != 1) {
      out += mag.get_str();
      if (i > 0) out += '*';
    }
    if (i >= 1) out += 'X';
    if (i >= 2) out += '^' + std::to_string(i);
  }
  return out;
}

std::string Polynomial::to_list() const {
  std::string out = "[";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ", ";
    out += coeffs_[i].get_str();
  }
  return out + "]";
}

namespace {

std::string strip_spaces(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  return s;
}

Polynomial parse_list(const std::string& s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw ParseError("malformed coefficient list: " + s);
  IntCoeffs coeffs;
  std::string body = s.substr(1, s.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    mpz_class v;
    if (item.empty() || v.set_str(item[0] == '+' ? item.substr(1) : item, 10) != 0)
      throw ParseError("bad coefficient '" + item + "' in " + s);
    coeffs.push_back(v);
  }
  return Polynomial(std::move(coeffs));
}

Polynomial parse_expression(const std::string& s) {
  std::map<std::size_t, mpz_class> terms;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError("cannot parse polynomial '" + s + "': " + why);
  };
  if (s.empty()) fail("empty");
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      fail("expected '+' or '-' at position " + std::to_string(i));
    }
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
    mpz_class coef = digits.empty() ? mpz_class(1) : mpz_class(digits);
    std::size_t power = 0;
    if (i < s.size() && s[i] == '*') {
      if (digits.empty()) fail("dangling '*'");
      ++i;
    }
    if (i < s.size() && (s[i] == 'X' || s[i] == 'x')) {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string exp;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) exp += s[i++];
        if (exp.empty()) fail("missing exponent");
        power = std::stoul(exp);
      }
    } else if (digits.empty()) {
      fail("expected a coefficient or X at position " + std::to_string(i));
    }
    terms[power] += sign * coef;
  }
  IntCoeffs coeffs(terms.rbegin()->first + 1, 0);
  for (const auto& [p, c] : terms) coeffs[p] = c;
  return Polynomial(std::move(coeffs));
}

}  // namespace

Polynomial Polynomial::parse(std::string_view text) {
  const std::string s = strip_spaces(text);
  if (!s.empty() && s.front() == '[') return parse_list(s);
  return parse_expression(s);
}

std::vector<Polynomial> parse_tuple(std::string_view text) {
  std::vector<Polynomial> out;
  std::string current;
  int depth = 0;
  for (char c : text) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(Polynomial::parse(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) out.push_back(Polynomial::parse(current));
  if (out.empty()) throw ParseError("empty tuple");
  return out;
}

int PolyTuple::total_degree() const noexcept {
  int d = 0;
  for (const auto& f : polys) d += f.degree();
  return d;
}

std::string PolyTuple::hash() const {
  std::string canonical;
  for (const auto& f : polys) canonical += f.to_list() + ";";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

std::string PolyTuple::to_string() const {
  std::string out;
  for (const auto& f : polys) out += (out.empty() ? "" : ",") + f.to_string();
  return out;
}

std::optional<bool> positive_on_naturals(const IntCoeffs& g_in, bool strict) {
  IntCoeffs g = g_in;
  trim(g);
  if (g.empty()) return !strict;
  if (std::all_of(g.begin(), g.end(), [](const mpz_class& c) { return c >= 0; }))
    return true;
  if (g.back() < 0) return false;
  // Cauchy bound: every real root r has |r| < 1 + max |g_i / g_d|.
  mpz_class top = 0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) top = std::max(top, mpz_class(abs(g[i])));
  mpz_class bound = 1 + (top + g.back() - 1) / g.back();
  constexpr unsigned long kMaxCheck = 1000000;
  if (bound > kMaxCheck) return std::nullopt;
  const unsigned long limit = std::max(bound.get_ui(), 100ul);
  for (unsigned long n = 1; n <= limit; ++n) {
    mpz_class acc = g.back();
    for (std::size_t i = g.size() - 1; i-- > 0;) acc = acc * n + g[i];
    if (strict ? acc <= 0 : acc < 0) return false;
  }
  return true;
}

namespace {

// Eventual order: larger degree wins, then lexicographic from the top.
bool eventually_less(const Polynomial& a, const Polynomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = a.coefficients().size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

bool chain_holds(const std::vector<Polynomial>& polys) {
  for (const auto& f : polys)
    for (const auto& c : f.coefficients())
      if (c < 0) return false;
  const IntCoeffs identity{0, 1};
  auto first = positive_on_naturals(subtract(polys.front().coefficients(), identity), false);
  if (!first || !*first) return false;
  for (std::size_t j = 0; j + 1 < polys.size(); ++j) {
    auto link = positive_on_naturals(
        subtract(polys[j + 1].coefficients(), polys[j].coefficients()), true);
    if (!link || !*link) return false;
  }
  return true;
}

}  // namespace

PolyTuple normalize_tuple(std::vector<Polynomial> raw) {
  if (raw.empty()) throw DomainError("tuple must contain at least one polynomial");
  std::sort(raw.begin(), raw.end(), eventually_less);
  for (std::size_t j = 0; j + 1 < raw.size(); ++j)
    if (raw[j] == raw[j + 1])
      throw OrderingImpossible("duplicate polynomial " + raw[j].to_string());

  constexpr std::uint64_t kMaxShift = 100000;
  std::vector<Polynomial> current = raw;
  for (std::uint64_t N = 0; N <= kMaxShift; ++N) {
    if (chain_holds(current)) return PolyTuple{std::move(current), N};
    for (auto& f : current) f = f.shifted(1);
  }
  throw OrderingImpossible("no shift N <= " + std::to_string(kMaxShift) +
                           " orders the tuple");
}

// ---------------------------------------------------------------------------
// Irreducibility

namespace {

mpz_class content(const IntCoeffs& f) {
  mpz_class g = 0;
  for (const auto& c : f) g = gcd(g, c);
  return g;
}

// Positive divisors of |n| when n can be fully factored cheaply.
std::optional<std::vector<mpz_class>> divisors(mpz_class n) {
  n = abs(n);
  if (n == 0) return std::nullopt;
  std::vector<std::pair<mpz_class, unsigned>> factors;
  for (unsigned long d = 2; d <= 1000000 && mpz_class(d) * d <= n; d += (d == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      n /= d;
      ++e;
    }
    if (e) factors.emplace_back(mpz_class(d), e);
  }
  if (n > 1) {
    const bool small = n < mpz_class("1000000000000");
    if (!small && mpz_probab_prime_p(n.get_mpz_t(), 30) == 0) return std::nullopt;
    factors.emplace_back(n, 1);
  }
  std::vector<mpz_class> divs{1};
  for (const auto& [q, e] : factors) {
    const std::size_t base = divs.size();
    mpz_class power = 1;
    for (unsigned i = 0; i < e; ++i) {
      power *= q;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * power);
    }
    if (divs.size() > 200000) return std::nullopt;
  }
  return divs;
}

// Exact quotient f / g in Z[X]; g must divide f.
IntCoeffs exact_divide(const IntCoeffs& f, const IntCoeffs& g) {
  IntCoeffs r = f;
  IntCoeffs q(f.size() - g.size() + 1, 0);
  for (std::size_t i = q.size(); i-- > 0;) {
    const mpz_class& top = r[i + g.size() - 1];
    if (top % g.back() != 0) throw DomainError("inexact polynomial division");
    q[i] = top / g.back();
    for (std::size_t j = 0; j < g.size(); ++j) r[i + j] -= q[i] * g[j];
  }
  return q;
}

std::optional<Reducible> rational_root_factor(const Polynomial& f) {
  const IntCoeffs& c = f.coefficients();
  if (c[0] == 0) {
    IntCoeffs x{0, 1};
    return Reducible{Polynomial(x), Polynomial(exact_divide(c, x))};
  }
  auto num = divisors(c[0]);
  auto den = divisors(f.leading());
  if (!num || !den) return std::nullopt;
  const int d = f.degree();
  for (const auto& b : *den) {
    for (const auto& a0 : *num) {
      if (gcd(a0, b) != 1) continue;
      for (int sign : {1, -1}) {
        const mpz_class a = sign * a0;
        // b^d f(a / b) = sum c_i a^i b^(d - i)
        mpz_class acc = 0, apow = 1;
        std::vector<mpz_class> bpow(d + 1, 1);
        for (int i = 1; i <= d; ++i) bpow[i] = bpow[i - 1] * b;
        for (int i = 0; i <= d; ++i) {
          acc += c[i] * apow * bpow[d - i];
          apow *= a;
        }
        if (acc == 0) {
          IntCoeffs lin{-a, b};
          return Reducible{Polynomial(lin), Polynomial(exact_divide(c, lin))};
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

IrreducibilityStatus irreducibility_status(const Polynomial& f, int budget) {
  const mpz_class lc = f.leading();
  const mpz_class cont = content(f.coefficients());
  IntCoeffs primitive = f.coefficients();
  for (auto& c : primitive) c /= cont;

  auto next_good_prime = [&](std::uint64_t from) {
    std::uint64_t p = from;
    while (!is_prime(p) || mpz_divisible_ui_p(lc.get_mpz_t(), p)) ++p;
    return p;
  };

  if (f.degree() == 1) return Irreducible{next_good_prime(2)};
  if (auto r = rational_root_factor(f)) return *r;

  Undetermined undetermined;
  std::uint64_t p = 1;
  for (int tried = 0; tried < budget; ++tried) {
    p = next_good_prime(p + 1);
    undetermined.primes_tried.push_back(p);
    if (fp::is_irreducible(fp::reduce(primitive, p), p)) return Irreducible{p};
  }
  return undetermined;
}

std::string describe(const IrreducibilityStatus& status) {
  struct Visitor {
    std::string operator()(const Irreducible& s) const {
      return "irreducible (witness p=" + std::to_string(s.witness) + ")";
    }
    std::string operator()(const Reducible& s) const {
      return "reducible (factor " + s.factor.to_string() + ")";
    }
    std::string operator()(const Undetermined& s) const {
      return "undetermined after " + std::to_string(s.primes_tried.size()) + " primes";
    }
  };
  return std::visit(Visitor{}, status);
}

}  // namespace bhlab
