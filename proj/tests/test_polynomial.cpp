#include <gtest/gtest.h>

#include <random>

#include "bhlab/errors.hpp"
#include "bhlab/polynomial.hpp"

using namespace bhlab;

namespace {

Polynomial P(const char* text) { return Polynomial::parse(text); }

// Sum of c_i * n^i with an independently computed power.
mpz_class monomial_sum(const Polynomial& f, const mpz_class& n) {
  mpz_class total = 0;
  for (std::size_t i = 0; i < f.coefficients().size(); ++i) {
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), n.get_mpz_t(), i);
    total += f[i] * power;
  }
  return total;
}

}  // namespace

TEST(Polynomial, EvaluateExamples) {
  EXPECT_EQ(evaluate(P("X^2+1"), 3), 10);
  EXPECT_EQ(evaluate(P("X"), 7), 7);
  EXPECT_EQ(evaluate(P("2*X^3+X+5"), 10), 2015);
}

TEST(Polynomial, ParseForms) {
  EXPECT_EQ(P("[1, 0, 1]"), P("X^2+1"));
  EXPECT_EQ(P("2*x^3 + x + 5").to_string(), "2*X^3+X+5");
  EXPECT_EQ(P("X-1").coefficients(), (IntCoeffs{-1, 1}));
  EXPECT_EQ(P("X^2+1").to_list(), "[1, 0, 1]");
  EXPECT_EQ(P("3X^2 - 4X + 7").to_string(), P(P("3X^2 - 4X + 7").to_string().c_str()).to_string());
  EXPECT_THROW(P("5"), DomainError);
  EXPECT_THROW(P("-X"), DomainError);
  EXPECT_THROW(P("X^"), ParseError);
}

TEST(Polynomial, HornerMatchesMonomialSum) {
  std::mt19937_64 gen(12345);
  for (int trial = 0; trial < 1000; ++trial) {
    const int degree = 1 + static_cast<int>(gen() % 6);
    IntCoeffs c;
    for (int i = 0; i <= degree; ++i) c.emplace_back(static_cast<long>(gen() % 2001) - 1000);
    c.back() = 1 + static_cast<long>(gen() % 1000);
    const Polynomial f(c);
    const mpz_class n(static_cast<unsigned long>(gen() % 1000001));
    ASSERT_EQ(f(n), monomial_sum(f, n)) << f.to_string() << " at " << n.get_str();
  }
}

TEST(Polynomial, Evaluate64BitFastPathAgrees) {
  const Polynomial f = P("2*X^3+X+5");
  EXPECT_EQ(f.evaluate_u64(1000), 2000001005u);
  EXPECT_FALSE(f.evaluate_u64(std::uint64_t{1} << 40).has_value());
  const Polynomial g = P("X^2+1");
  const std::uint64_t n = 4000000000ULL;
  EXPECT_EQ(mpz_class(static_cast<unsigned long>(*g.evaluate_u64(n))),
            g(mpz_class(static_cast<unsigned long>(n))));
}

TEST(Polynomial, ShiftExpandsTaylor) {
  EXPECT_EQ(P("X^2-2*X+2").shifted(1), P("X^2+1"));
  EXPECT_EQ(P("X").shifted(5), P("X+5"));
}

TEST(Normalize, Examples) {
  const auto a = normalize_tuple(parse_tuple("X,X+2"));
  EXPECT_EQ(a.shift, 0u);
  EXPECT_EQ(a.to_string(), "X,X+2");
  const auto b = normalize_tuple(parse_tuple("X+2,X"));
  EXPECT_EQ(b.shift, 0u);
  EXPECT_EQ(b[0], P("X"));
  EXPECT_EQ(b[1], P("X+2"));
  const auto c = normalize_tuple(parse_tuple("X^2-2*X+2"));
  EXPECT_EQ(c.shift, 1u);
  EXPECT_EQ(c[0], P("X^2+1"));
}

TEST(Normalize, DuplicatesRejected) {
  EXPECT_THROW(normalize_tuple(parse_tuple("X+1,X+1")), OrderingImpossible);
}

TEST(Normalize, ChainHoldsOnSmallRange) {
  const char* corpus[] = {"X,X+2,X+6",      "X^2+1,X",        "X^2-X+1,X^2+X+1", "2*X-1,X",
                          "X^3-5,X^2+3,X+1", "X^2+X+41,3*X+7", "X-10,X+10"};
  for (const char* text : corpus) {
    const auto t = normalize_tuple(parse_tuple(text));
    for (const auto& f : t.polys)
      for (const auto& c : f.coefficients()) ASSERT_GE(c, 0) << text;
    for (unsigned long n = 1; n <= 10000; ++n) {
      const mpz_class N(n);
      mpz_class previous = t[0](N);
      ASSERT_LE(N, previous) << text << " n=" << n;
      for (std::size_t j = 1; j < t.k(); ++j) {
        const mpz_class v = t[j](N);
        ASSERT_LT(previous, v) << text << " n=" << n;
        previous = v;
      }
    }
  }
}

TEST(Normalize, ShiftIsMinimal) {
  const auto t = normalize_tuple(parse_tuple("X-10,X+10"));
  EXPECT_EQ(t.shift, 10u);
  const auto q = normalize_tuple(parse_tuple("X^2-2*X+2"));
  // N = 0 leaves a negative coefficient
  EXPECT_LT(P("X^2-2*X+2")[1], 0);
  EXPECT_EQ(q.shift, 1u);
}

TEST(Normalize, HashDependsOnContent) {
  const auto a = normalize_tuple(parse_tuple("X,X+2"));
  const auto b = normalize_tuple(parse_tuple("X+2,X"));
  const auto c = normalize_tuple(parse_tuple("X,X+6"));
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(a.hash().size(), 16u);
}

TEST(Irreducibility, Examples) {
  const auto a = irreducibility_status(P("X^2+1"));
  ASSERT_TRUE(std::holds_alternative<Irreducible>(a));
  EXPECT_EQ(std::get<Irreducible>(a).witness, 3u);

  const auto b = irreducibility_status(P("X^2-1"));
  ASSERT_TRUE(std::holds_alternative<Reducible>(b));
  const auto& r = std::get<Reducible>(b);
  EXPECT_EQ(multiply(r.factor.coefficients(), r.cofactor.coefficients()),
            P("X^2-1").coefficients());

  for (int budget : {1, 4, 20}) {
    const auto c = irreducibility_status(P("X^4+X^2+1"), budget);
    ASSERT_TRUE(std::holds_alternative<Undetermined>(c));
    EXPECT_EQ(std::get<Undetermined>(c).primes_tried.size(), static_cast<std::size_t>(budget));
  }
}

TEST(Irreducibility, LinearAndReducibleWithContent) {
  EXPECT_TRUE(std::holds_alternative<Irreducible>(irreducibility_status(P("2*X+1"))));
  const auto s = irreducibility_status(P("2*X^2-8"));
  ASSERT_TRUE(std::holds_alternative<Reducible>(s));
  const auto& r = std::get<Reducible>(s);
  EXPECT_EQ(multiply(r.factor.coefficients(), r.cofactor.coefficients()),
            P("2*X^2-8").coefficients());
}

TEST(Irreducibility, ReducibleFactorsReproduceInput) {
  const char* corpus[] = {"X^2-1", "X^3-X", "6*X^2+5*X+1", "X^3+1", "4*X^2-9"};
  for (const char* text : corpus) {
    const auto s = irreducibility_status(P(text));
    ASSERT_TRUE(std::holds_alternative<Reducible>(s)) << text;
    const auto& r = std::get<Reducible>(s);
    EXPECT_EQ(multiply(r.factor.coefficients(), r.cofactor.coefficients()),
              P(text).coefficients())
        << text;
  }
}

TEST(Irreducibility, WitnessDoesNotDivideLeading) {
  const auto s = irreducibility_status(P("3*X^2+1"));
  ASSERT_TRUE(std::holds_alternative<Irreducible>(s));
  EXPECT_NE(std::get<Irreducible>(s).witness, 3u);
}
