#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace qspir {

/// Exact arithmetic for error/secrecy probabilities and rates. Every
/// probability in the enumerations is dyadic, so int64 components are ample.
using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) {
  return double(r.numerator()) / double(r.denominator());
}

/// "p/q" (or just "p" when q = 1).
inline std::string fraction_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Exact decimal expansion for rationals with 2^a 5^b denominators
/// (every branch probability qualifies); rounded to 15 digits otherwise.
std::string decimal_string(Rational r);

/// Exact rational from a dyadic double (branch probabilities are powers of
/// two times small integers, so this conversion is lossless).
Rational rational_from_dyadic(double x);

}  // namespace qspir
