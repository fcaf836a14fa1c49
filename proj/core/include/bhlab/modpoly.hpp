#pragma once

// Dense polynomials over the prime field F_p (p < 2^63), ascending order.
// The zero polynomial is the empty vector.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bhlab/polynomial.hpp"

namespace bhlab::fp {

using Coeffs = std::vector<std::uint64_t>;

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) noexcept {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}
inline std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) noexcept {
  const std::uint64_t s = a + b;
  return (s >= p || s < a) ? s - p : s;
}
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) noexcept {
  return a >= b ? a - b : a + (p - b);
}
std::uint64_t pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) noexcept;
std::uint64_t inverse(std::uint64_t a, std::uint64_t p);

/// Coefficients reduced into [0, p), trimmed.
Coeffs reduce(const IntCoeffs& f, std::uint64_t p);

void trim(Coeffs& a) noexcept;
inline int degree(const Coeffs& a) noexcept { return static_cast<int>(a.size()) - 1; }

std::uint64_t eval(const Coeffs& a, std::uint64_t x, std::uint64_t p) noexcept;

Coeffs add(const Coeffs& a, const Coeffs& b, std::uint64_t p);
Coeffs sub(const Coeffs& a, const Coeffs& b, std::uint64_t p);
Coeffs mul(const Coeffs& a, const Coeffs& b, std::uint64_t p);
/// Quotient and remainder; throws DomainError when b is zero.
std::pair<Coeffs, Coeffs> divmod(const Coeffs& a, const Coeffs& b, std::uint64_t p);
Coeffs rem(const Coeffs& a, const Coeffs& m, std::uint64_t p);
Coeffs mulmod(const Coeffs& a, const Coeffs& b, const Coeffs& m, std::uint64_t p);
/// base^e mod m by square-and-multiply.
Coeffs powmod(const Coeffs& base, std::uint64_t e, const Coeffs& m, std::uint64_t p);
/// Monic gcd (zero only if both inputs are zero).
Coeffs gcd(Coeffs a, Coeffs b, std::uint64_t p);
Coeffs make_monic(Coeffs a, std::uint64_t p);

/// The polynomial X mod p.
inline Coeffs x_poly() { return Coeffs{0, 1}; }

/// gcd(X^p - X, f): the product of the distinct linear factors of f.
/// f must be nonzero with degree >= 1.
Coeffs linear_part(const Coeffs& f, std::uint64_t p);

/// Distinct roots of f in F_p by equal-degree splitting of linear_part(f);
/// randomness comes from a fixed internal stream so the result is
/// deterministic.  Returned sorted.
std::vector<std::uint64_t> split_roots(const Coeffs& f, std::uint64_t p);

/// True iff f (degree >= 1, nonzero leading coefficient mod p) is irreducible
/// over F_p, decided by distinct-degree factorization.
bool is_irreducible(const Coeffs& f, std::uint64_t p);

}  // namespace bhlab::fp
