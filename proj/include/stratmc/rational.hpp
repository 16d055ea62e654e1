#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stratmc {

// Arbitrary-precision rational, canonical form maintained by the backend.
// All exact computations in the library run on this type; doubles appear
// only in the Monte Carlo sampling path and at output boundaries.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline Rational rat_pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational b = base;
  unsigned e = exponent;
  while (e > 0) {
    if (e & 1u) result *= b;
    b *= b;
    e >>= 1u;
  }
  return result;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Every finite double is a dyadic rational, so this conversion is exact.
inline Rational rational_from_double(double x) { return Rational(x); }

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

// Accepts "5", "-5", "3/4", "-3/4".
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(BigInt(text));
    }
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num) / Rational(den);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
}

}  // namespace stratmc
