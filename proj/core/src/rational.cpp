#include "qspir/rational.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qspir {

std::string decimal_string(Rational r) {
  std::string out;
  if (r < Rational(0)) {
    out += "-";
    r = -r;
  }
  long long num = r.numerator();
  long long den = r.denominator();
  out += std::to_string(num / den);
  num %= den;
  if (num == 0) return out;
  out += ".";
  // Terminating expansion iff den = 2^a 5^b after reduction.
  long long d = den;
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  const bool terminates = (d == 1);
  const int max_digits = terminates ? 64 : 15;
  unsigned __int128 n = static_cast<unsigned __int128>(num);
  for (int i = 0; i < max_digits && n != 0; ++i) {
    n *= 10;
    out += char('0' + int(n / static_cast<unsigned __int128>(den)));
    n %= static_cast<unsigned __int128>(den);
  }
  return out;
}

Rational rational_from_dyadic(double x) {
  if (x < 0.0 || !std::isfinite(x))
    throw std::invalid_argument("expected a finite nonnegative probability");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, mant in [0.5,1)
  // Scale the mantissa to an integer; doubles have 53 mantissa bits.
  const double scaled = std::ldexp(mant, 53);
  if (scaled != std::floor(scaled))
    throw std::invalid_argument("value is not dyadic");
  long long m = static_cast<long long>(scaled);
  int e = exp - 53;
  while (m % 2 == 0 && e < 0) {
    m /= 2;
    ++e;
  }
  if (e > 0) {
    if (e > 10) throw std::invalid_argument("dyadic value out of range");
    return Rational(m << e, 1);
  }
  if (-e > 62) throw std::invalid_argument("dyadic denominator overflows");
  return Rational(m, 1LL << -e);
}

}  // namespace qspir
