#pragma once

// Exact arithmetic layer: arbitrary-precision integers and rationals,
// plus the handful of helpers (floor, frac, pow, gcd, bit-length logs)
// the rest of the library leans on.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace convlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(const BigInt& n) { return n.convert_to<double>(); }

inline BigInt floor_big(const Rational& q) {
  BigInt n = numerator(q), d = denominator(q);  // d > 0 canonical
  BigInt t = n / d;                             // truncates toward zero
  if (n < 0 && t * d != n) --t;
  return t;
}

// Fractional part in [0, 1).
inline Rational frac(const Rational& q) { return q - Rational(floor_big(q)); }

inline BigInt pow_big(const BigInt& base, unsigned long exp) {
  BigInt r = 1, b = base;
  unsigned long e = exp;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

inline BigInt gcd_big(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(a, b);
}

// log2 of a positive big integer, accurate to ~1e-15 relative, without
// overflowing double for huge inputs.
inline double log2_big(const BigInt& n) {
  if (n <= 0) throw std::domain_error("log2_big: argument must be positive");
  const unsigned bits = msb(n);  // floor(log2 n)
  if (bits <= 62) return std::log2(n.convert_to<double>());
  const unsigned shift = bits - 52;
  const double mant = BigInt(n >> shift).convert_to<double>();
  return std::log2(mant) + static_cast<double>(shift);
}

inline double log_big(const BigInt& n) { return log2_big(n) * std::log(2.0); }

// Exact double -> rational (every finite double is a dyadic rational).
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("rational_from_double: non-finite input");
  if (x == 0.0) return Rational(0);
  int exp2 = 0;
  const double m = std::frexp(x, &exp2);              // x = m * 2^exp2, |m| in [0.5, 1)
  const auto mant = static_cast<long long>(std::ldexp(m, 53));  // integer, |mant| < 2^53
  exp2 -= 53;
  Rational r(mant);
  if (exp2 >= 0)
    r *= Rational(pow_big(2, static_cast<unsigned long>(exp2)));
  else
    r /= Rational(pow_big(2, static_cast<unsigned long>(-exp2)));
  return r;
}

inline std::string to_string_big(const BigInt& n) { return n.str(); }
inline std::string to_string_rat(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

// Parses "p/q", "p", or a plain integer string into a rational.
inline Rational rational_from_string(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  const BigInt num(s.substr(0, slash));
  const BigInt den(s.substr(slash + 1));
  if (den == 0) throw std::domain_error("rational_from_string: zero denominator");
  return Rational(num, den);
}

}  // namespace convlab
