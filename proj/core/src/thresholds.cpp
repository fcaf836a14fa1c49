#include "bhlab/thresholds.hpp"

#include <cmath>
#include <sstream>

#include "bhlab/errors.hpp"

namespace bhlab {

ThresholdProfile ThresholdProfile::desk() { return ThresholdProfile{}; }

ThresholdProfile ThresholdProfile::asymptotic() {
  ThresholdProfile p;
  p.t_kind = TKind::asymptotic;
  p.t_param = 0;
  p.z_kind = ZKind::asymptotic;
  p.z_param = kInvExpGamma;
  return p;
}

ThresholdProfile ThresholdProfile::fixed(double t0, double z0) {
  ThresholdProfile p;
  p.t_kind = TKind::fixed;
  p.t_param = t0;
  p.z_kind = ZKind::fixed;
  p.z_param = z0;
  return p;
}

double ThresholdProfile::t(double n) const {
  switch (t_kind) {
    case TKind::asymptotic: {
      if (n <= std::numbers::e) return 1.0;
      const double L = std::log(n);
      return std::exp(std::pow(L * std::log(L), 2.0 / 3.0));
    }
    case TKind::exp_pow:
      if (n <= 1) return 1.0;
      return std::exp(std::pow(std::log(n), t_param));
    case TKind::fixed:
      return t_param;
  }
  return 1.0;
}

double ThresholdProfile::z(double n) const {
  switch (z_kind) {
    case ZKind::asymptotic:
      return std::pow(n, kInvExpGamma);
    case ZKind::pow:
      return std::pow(n, z_param);
    case ZKind::fixed:
      return z_param;
  }
  return 1.0;
}

void ThresholdProfile::validate() const {
  if (t_kind == TKind::exp_pow && !(t_param > 0 && t_param < 1))
    throw ProfileInvalid("exp_pow exponent must lie in (0, 1)");
  if (t_kind == TKind::fixed && !(t_param >= 1))
    throw ProfileInvalid("fixed t0 must be >= 1");
  if (z_kind == ZKind::pow && !(z_param > 0 && z_param <= 1))
    throw ProfileInvalid("pow exponent must lie in (0, 1]");
  if (z_kind == ZKind::fixed && !(z_param >= 2))
    throw ProfileInvalid("fixed z0 must be >= 2");
  if (t_kind == TKind::fixed && z_kind == ZKind::fixed && !(t_param < z_param))
    throw ProfileInvalid("fixed thresholds need t0 < z0");
}

std::optional<std::uint64_t> ThresholdProfile::ordered_from(std::uint64_t lo,
                                                            std::uint64_t hi) const {
  auto ordered = [&](std::uint64_t n) {
    const double x = static_cast<double>(n);
    return t(x) < z(x);
  };
  if (!ordered(hi)) return std::nullopt;
  if (ordered(lo)) return lo;
  std::uint64_t bad = lo, good = hi;
  while (good - bad > 1) {
    const std::uint64_t mid = bad + (good - bad) / 2;
    (ordered(mid) ? good : bad) = mid;
  }
  return good;
}

void ThresholdProfile::require_ordered(std::uint64_t lo, std::uint64_t hi) const {
  const auto from = ordered_from(lo, hi);
  if (!from || *from > lo) {
    std::ostringstream msg;
    msg << "t(n) >= z(n) on part of [" << lo << ", " << hi << "]";
    if (from) msg << " (ordered only from n = " << *from << ")";
    throw ProfileInvalid(msg.str());
  }
}

namespace {

std::string with_param(const char* name, double v) {
  std::ostringstream out;
  out.precision(17);
  out << name << ':' << v;
  return out.str();
}

double parse_param(const std::string& text, std::size_t colon) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ProfileInvalid("bad threshold parameter in '" + text + "'");
  }
}

}  // namespace

std::string ThresholdProfile::t_text() const {
  switch (t_kind) {
    case TKind::asymptotic: return "asymptotic";
    case TKind::exp_pow: return with_param("exp_pow", t_param);
    case TKind::fixed: return with_param("fixed", t_param);
  }
  return "?";
}

std::string ThresholdProfile::z_text() const {
  switch (z_kind) {
    case ZKind::asymptotic: return "asymptotic";
    case ZKind::pow: return with_param("pow", z_param);
    case ZKind::fixed: return with_param("fixed", z_param);
  }
  return "?";
}

void ThresholdProfile::parse_t(const std::string& text, ThresholdProfile& into) {
  if (text == "asymptotic") {
    into.t_kind = TKind::asymptotic;
    into.t_param = 0;
    return;
  }
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (colon == std::string::npos) throw ProfileInvalid("unknown t profile '" + text + "'");
  if (kind == "exp_pow") {
    into.t_kind = TKind::exp_pow;
  } else if (kind == "fixed") {
    into.t_kind = TKind::fixed;
  } else {
    throw ProfileInvalid("unknown t profile '" + text + "'");
  }
  into.t_param = parse_param(text, colon);
}

void ThresholdProfile::parse_z(const std::string& text, ThresholdProfile& into) {
  if (text == "asymptotic") {
    into.z_kind = ZKind::asymptotic;
    into.z_param = kInvExpGamma;
    return;
  }
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (colon == std::string::npos) throw ProfileInvalid("unknown z profile '" + text + "'");
  if (kind == "pow") {
    into.z_kind = ZKind::pow;
  } else if (kind == "fixed") {
    into.z_kind = ZKind::fixed;
  } else {
    throw ProfileInvalid("unknown z profile '" + text + "'");
  }
  into.z_param = parse_param(text, colon);
}

double error_scale(double x) {
  if (!(x > std::numbers::e)) throw DomainError("E(x) needs x > e");
  const double L = std::log(x);
  return std::exp(-std::cbrt(L) * std::pow(std::log(L), 1.0 / 6.0));
}

Thresholds thresholds(double x, const ThresholdProfile& profile) {
  if (!(x > std::numbers::e)) throw DomainError("thresholds need x > e");
  profile.validate();
  return {profile.t(x), profile.z(x), error_scale(x)};
}

ThetaTable::ThetaTable(std::uint64_t bound)
    : primes_(shared_primes(std::max<std::uint64_t>(bound, 2))) {
  prefix_.reserve(primes_->primes.size());
  double acc = 1.0;
  for (auto p : primes_->primes) {
    acc *= 1.0 - 1.0 / static_cast<double>(p);
    prefix_.push_back(acc);
  }
}

double ThetaTable::operator()(double z) const {
  const std::size_t n = primes_->count_up_to(z);
  return n == 0 ? 1.0 : prefix_[n - 1];
}

}  // namespace bhlab
