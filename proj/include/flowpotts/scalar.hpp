#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace flowpotts {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Working precision for every floating evaluation (64-bit mantissa on x86-64).
using Real = long double;

// Integer power with 0^0 = 1.
template <class T>
T ipow(const T& base, std::uint64_t exponent) {
  T result{1};
  T b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

// Integer power allowing negative exponents (base must be non-zero then).
template <class T>
T ipow_signed(const T& base, std::int64_t exponent) {
  if (exponent >= 0) return ipow(base, static_cast<std::uint64_t>(exponent));
  return T{1} / ipow(base, static_cast<std::uint64_t>(-exponent));
}

inline Real to_real(const Rational& r) { return r.convert_to<Real>(); }
inline Real to_real(const BigInt& i) { return i.convert_to<Real>(); }

// Exact binary value of a floating number.
Rational rational_from_real(Real x);

// Parses "3", "-2/7", "0.25" into an exact rational.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& r);
std::string to_string(const BigInt& i);

}  // namespace flowpotts
