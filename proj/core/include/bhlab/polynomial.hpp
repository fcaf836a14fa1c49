#pragma once

// Integer polynomials in one variable, tuple normalization, and a
// best-effort irreducibility certifier.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bhlab {

/// Dense coefficient vector in ascending degree order, no invariants.
using IntCoeffs = std::vector<mpz_class>;

/// Non-constant integer polynomial with a positive leading coefficient.
class Polynomial {
 public:
  /// Throws DomainError when the trimmed degree is < 1 or the leading
  /// coefficient is not positive.
  explicit Polynomial(IntCoeffs ascending);

  /// Accepts "X^2+1", "2*x^3 + x + 5", "X-1" or a coefficient list "[1, 0, 1]".
  static Polynomial parse(std::string_view text);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const IntCoeffs& coefficients() const noexcept { return coeffs_; }
  const mpz_class& leading() const noexcept { return coeffs_.back(); }
  const mpz_class& operator[](std::size_t i) const { return coeffs_[i]; }

  /// Exact value at an integer argument (Horner).
  mpz_class operator()(const mpz_class& n) const;
  /// Value at n when it fits in 64 bits.
  std::optional<std::uint64_t> evaluate_u64(std::uint64_t n) const;
  /// Floating value at a real argument, used by the quadrature.
  double evaluate_real(double u) const;

  /// f(X + N).
  Polynomial shifted(const mpz_class& N) const;

  /// Human form, e.g. "X^2+1".
  std::string to_string() const;
  /// Coefficient list form, e.g. "[1, 0, 1]".
  std::string to_list() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  IntCoeffs coeffs_;
};

mpz_class evaluate(const Polynomial& f, const mpz_class& n);

/// Ordered tuple of distinct polynomials satisfying
///   n <= f_1(n) < f_2(n) < ... < f_k(n)   for every n >= 1
/// with all coefficients nonnegative.  `shift` records the substitution
/// X -> X + shift applied to the raw input.
struct PolyTuple {
  std::vector<Polynomial> polys;
  std::uint64_t shift = 0;

  std::size_t k() const noexcept { return polys.size(); }
  int total_degree() const noexcept;
  const Polynomial& operator[](std::size_t j) const { return polys[j]; }
  /// Content hash of the normalized coefficients (16 hex digits).
  std::string hash() const;
  std::string to_string() const;
};

/// Parses a comma separated tuple string such as "X,X+2" (commas inside
/// brackets are kept together, so "[0,1],[2,1]" also works).
std::vector<Polynomial> parse_tuple(std::string_view text);

/// Sorts the polynomials into eventual order and finds the smallest shift N
/// making every coefficient nonnegative and the ordering chain hold for all
/// n >= 1.  Throws OrderingImpossible for duplicate inputs.
PolyTuple normalize_tuple(std::vector<Polynomial> raw);

/// Exact check that g(n) > 0 (strict) or g(n) >= 0 for every integer
/// n >= 1.  Returns std::nullopt when the root bound is too large to verify.
std::optional<bool> positive_on_naturals(const IntCoeffs& g, bool strict);

struct Irreducible {
  std::uint64_t witness;  // reduction mod witness is irreducible
};
struct Reducible {
  Polynomial factor;
  Polynomial cofactor;  // factor * cofactor == input
};
struct Undetermined {
  std::vector<std::uint64_t> primes_tried;
};
using IrreducibilityStatus = std::variant<Irreducible, Reducible, Undetermined>;

/// Degree 1 → Irreducible; otherwise rational-root search, then
/// distinct-degree factorization modulo the first `budget` primes not
/// dividing the leading coefficient.
IrreducibilityStatus irreducibility_status(const Polynomial& f, int budget = 20);

std::string describe(const IrreducibilityStatus& status);

// Exact arithmetic on raw coefficient vectors.
IntCoeffs multiply(const IntCoeffs& a, const IntCoeffs& b);
IntCoeffs subtract(const IntCoeffs& a, const IntCoeffs& b);
void trim(IntCoeffs& a);

}  // namespace bhlab
