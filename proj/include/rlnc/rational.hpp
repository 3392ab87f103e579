#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace rlnc {

/// Exact rational in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string numerator_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str();
}
inline std::string denominator_string(const Rational& r) {
  return boost::multiprecision::denominator(r).str();
}
/// "n/d", or just "n" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  auto d = denominator_string(r);
  return d == "1" ? numerator_string(r) : numerator_string(r) + "/" + d;
}
inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

/// base^exp for a nonnegative integer exponent.
inline Rational pow(Rational base, std::uint64_t exp) {
  Rational result = 1;
  while (exp) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

}  // namespace rlnc
