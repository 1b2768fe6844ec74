#pragma once

#include "flowpotts/scalar.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace flowpotts {

enum class CheckStatus { pass, fail, uncertified };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::uncertified: return "uncertified";
  }
  return "?";
}

// One identity evaluated numerically: |lhs - rhs| against a certified bound.
struct IdentityCheck {
  Real lhs = 0;
  Real rhs = 0;
  Real discrepancy = 0;
  Real bound = 0;
  std::uint32_t truncation_level = 0;
  CheckStatus status = CheckStatus::pass;

  bool passed() const { return status == CheckStatus::pass; }
};

// Floating round-off allowance for a value of the given magnitude.
inline Real rounding_allowance(Real scale, Real operations = 64) {
  return operations * std::numeric_limits<Real>::epsilon() * std::fabs(scale);
}

inline IdentityCheck make_check(Real lhs, Real rhs, Real bound, bool certified = true,
                                std::uint32_t truncation_level = 0) {
  IdentityCheck c;
  c.lhs = lhs;
  c.rhs = rhs;
  c.discrepancy = std::fabs(lhs - rhs);
  c.bound = bound;
  c.truncation_level = truncation_level;
  if (!certified || !std::isfinite(bound)) {
    c.status = CheckStatus::uncertified;
  } else {
    c.status = c.discrepancy <= bound ? CheckStatus::pass : CheckStatus::fail;
  }
  return c;
}

}  // namespace flowpotts
