#include "flowpotts/scalar.hpp"

#include "flowpotts/errors.hpp"

#include <cmath>

namespace flowpotts {

Rational rational_from_real(Real x) {
  if (!std::isfinite(x)) throw InvalidArgument("non-finite value has no rational form");
  int exponent = 0;
  Real mantissa = std::frexp(x, &exponent);
  // Scale the mantissa to an integer; 64 bits covers long double.
  constexpr int kBits = 64;
  Real scaled = std::ldexp(mantissa, kBits);
  auto negative = scaled < 0;
  if (negative) scaled = -scaled;
  BigInt num = 0;
  // Peel 32-bit chunks so no conversion overflows.
  for (int chunk = 0; chunk < 2; ++chunk) {
    Real high = std::floor(std::ldexp(scaled, -32 * (1 - chunk)));
    num <<= 32;
    num += BigInt(static_cast<std::uint64_t>(high));
    scaled -= std::ldexp(high, 32 * (1 - chunk));
  }
  if (negative) num = -num;
  int shift = exponent - kBits;
  Rational r(num);
  if (shift > 0) r *= Rational(BigInt(1) << shift);
  if (shift < 0) r /= Rational(BigInt(1) << -shift);
  return r;
}

namespace {

// Boost reads a leading 0 as an octal prefix; keep integers decimal.
std::string decimal_digits(std::string s) {
  bool negative = !s.empty() && (s[0] == '-' || s[0] == '+');
  std::string sign = negative && s[0] == '-' ? "-" : "";
  if (negative) s.erase(0, 1);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw std::runtime_error("not decimal");
  auto first = s.find_first_not_of('0');
  return sign + (first == std::string::npos ? "0" : s.substr(first));
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw InvalidArgument("empty rational literal");
  try {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
      BigInt num(decimal_digits(text.substr(0, slash)));
      BigInt den(decimal_digits(text.substr(slash + 1)));
      if (den == 0) throw InvalidArgument("zero denominator in '" + text + "'");
      return Rational(num, den);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(decimal_digits(text)));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t decimals = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw InvalidArgument("bad rational '" + text + "'");
    bool negative = digits[0] == '-';
    if (digits[0] == '+' || negative) digits.erase(0, 1);
    return Rational(BigInt(decimal_digits(digits)) * (negative ? -1 : 1), ipow(BigInt(10), decimals));
  } catch (const std::runtime_error&) {
    throw InvalidArgument("bad rational '" + text + "'");
  }
}

std::string to_string(const Rational& r) { return r.str(); }
std::string to_string(const BigInt& i) { return i.str(); }

}  // namespace flowpotts
