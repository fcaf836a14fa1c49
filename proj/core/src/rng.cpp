#include "bhlab/rng.hpp"

#include <cmath>

namespace bhlab {

unsigned __int128 bernoulli_threshold(double q) noexcept {
  using u128 = unsigned __int128;
  if (!(q > 0.0)) return 0;
  if (q >= 1.0) return u128{1} << 64;
  // q = mantissa * 2^(exp - 53) with a 53-bit integer mantissa.
  int exp = 0;
  const double frac = std::frexp(q, &exp);
  const auto mantissa = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  const int shift = 64 + exp - 53;
  if (shift >= 0) return u128{mantissa} << shift;
  if (shift <= -64) return 0;
  return u128{mantissa} >> (-shift);
}

}  // namespace bhlab
