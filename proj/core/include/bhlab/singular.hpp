#pragma once

// Singular series, Mertens-type products and the Bateman-Horn main term.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bhlab/localroots.hpp"
#include "bhlab/polynomial.hpp"

namespace bhlab {

/// 50 significant decimal digits, used for oracle runs.
using ExtendedReal = boost::multiprecision::cpp_bin_float_50;

enum class Precision { standard, extended };

/// prod_{p <= z} (1 - 1/p); the empty product is 1.
double theta(double z);

/// prod_{p <= z} (1 - |H mod p| / p).
double v_H(std::span<const std::int64_t> shifts, double z);

/// Throws Inadmissible(p) for the first prime p <= sum_j deg f_j with
/// nu_p == p.  Larger primes cannot be inadmissible since nu_p <= sum d_j.
void check_admissible(const PolyTuple& tuple);

struct SingularSeriesEstimate {
  double value = 0;  // the Mertens-normalized estimator
  std::uint64_t cutoff = 0;
  double direct = 0;   // prod (1 - nu_p/p)(1 - 1/p)^-k over p <= P
  double mertens = 0;  // e^{gamma k} (log P)^k prod (1 - nu_p/p)
  double spread = 0;   // |direct - mertens|
  /// Decimal renderings (17 digits, or 40 in extended mode).
  std::string direct_text;
  std::string mertens_text;
};

struct SingularOptions {
  Precision precision = Precision::standard;
  unsigned threads = 1;
  const LocalDataCache* cache = nullptr;  // used for p <= 10^6
};

/// Truncated singular series at cutoff P.  Throws Inadmissible.
SingularSeriesEstimate singular_series(const PolyTuple& tuple, std::uint64_t cutoff,
                                       const SingularOptions& options = {});

/// Integrand 1 / prod_j log f_j(u).
double main_term_integrand(const PolyTuple& tuple, double u);

/// M(x) = S * int_2^x du / prod_j log f_j(u), or M(x, y) = M(x + y) - M(x)
/// as a single integral over (x, x + y].  Relative tolerance 1e-10.
double main_term(const PolyTuple& tuple, double S, double x,
                 std::optional<double> y = std::nullopt);

struct ConvergenceRow {
  std::uint64_t x = 0;
  double value = 0;       // e^gamma log x prod_{p <= x} (1 - rho_p/p)
  double difference = 0;  // value minus the previous row's value (0 first)
};

/// Normalized partial products that stabilize toward the singular series of
/// a single irreducible polynomial.
std::vector<ConvergenceRow> lemma21_convergence(const Polynomial& f,
                                                std::span<const std::uint64_t> checkpoints,
                                                unsigned threads = 1);

}  // namespace bhlab
