#pragma once

// Threshold functions t(n), z(n) and the scale E(x), plus exact Mertens
// products Theta_z.

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bhlab/sieve.hpp"

namespace bhlab {

inline constexpr double kEulerGamma = std::numbers::egamma;
/// 1 / e^gamma, the exponent of z(x) = x^(1/e^gamma).
inline const double kInvExpGamma = std::exp(-std::numbers::egamma);

enum class ClampPolicy { clamp, reject };

/// How t(n) and z(n) are computed.
///   t: asymptotic  exp((log n log log n)^(2/3))
///      exp_pow     exp((log n)^alpha)
///      fixed       t0
///   z: asymptotic  n^(1/e^gamma)
///      pow         n^beta
///      fixed       z0
struct ThresholdProfile {
  enum class TKind { asymptotic, exp_pow, fixed };
  enum class ZKind { asymptotic, pow, fixed };

  TKind t_kind = TKind::exp_pow;
  double t_param = 2.0 / 3.0;
  ZKind z_kind = ZKind::pow;
  double z_param = std::exp(-std::numbers::egamma);
  ClampPolicy clamp = ClampPolicy::clamp;

  /// t(n) = exp((log n)^(2/3)), z(n) = n^(1/e^gamma).
  static ThresholdProfile desk();
  /// The asymptotic thresholds; infeasible at desk scale (t(n) > z(n)).
  static ThresholdProfile asymptotic();
  static ThresholdProfile fixed(double t0, double z0);

  double t(double n) const;
  double z(double n) const;

  /// Structural validity (parameters in range, t < z when both are fixed).
  /// Throws ProfileInvalid.
  void validate() const;

  /// Smallest n in [lo, hi] from which t(n) < z(n) holds up to hi, or
  /// nullopt when t(hi) >= z(hi).  Relies on {n : t(n) < z(n)} being upward
  /// closed, which holds for every supported kind.
  std::optional<std::uint64_t> ordered_from(std::uint64_t lo, std::uint64_t hi) const;
  /// Throws ProfileInvalid when t(n) >= z(n) somewhere in [lo, hi].
  void require_ordered(std::uint64_t lo, std::uint64_t hi) const;

  std::string t_text() const;
  std::string z_text() const;
  /// Parses "asymptotic", "exp_pow:<alpha>", "fixed:<t0>".
  static void parse_t(const std::string& text, ThresholdProfile& into);
  /// Parses "asymptotic", "pow:<beta>", "fixed:<z0>".
  static void parse_z(const std::string& text, ThresholdProfile& into);

  friend bool operator==(const ThresholdProfile&, const ThresholdProfile&) = default;
};

/// E(x) = exp(-(log x)^(1/3) (log log x)^(1/6)).
double error_scale(double x);

struct Thresholds {
  double t;
  double z;
  double E;
};

/// t(x), z(x) per profile and E(x).  Requires x > e.
Thresholds thresholds(double x, const ThresholdProfile& profile);

/// Theta_z = prod_{p <= z} (1 - 1/p) from a cumulative product over the
/// prime table.
class ThetaTable {
 public:
  explicit ThetaTable(std::uint64_t bound);
  double operator()(double z) const;
  std::uint64_t bound() const noexcept { return primes_->bound; }

 private:
  std::shared_ptr<const PrimeTable> primes_;
  std::vector<double> prefix_;
};

}  // namespace bhlab
