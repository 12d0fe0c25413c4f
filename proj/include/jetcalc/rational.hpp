#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "jetcalc/errors.hpp"

namespace jetcalc {

/// Exact rational scalar. GMP keeps every value in lowest terms with a
/// positive denominator once canonicalized; all constructors here do that.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses `a` or `a/b` with an optional leading sign. Whitespace is not allowed.
inline Rational parse_rational(std::string_view text) {
  auto valid_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!valid_digits(num) || !valid_digits(den)) throw ParseError("malformed rational '" + std::string(text) + "'", 0);
  Integer d(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", slash);
  Rational q(Integer(std::string(num), 10), d);
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

/// Canonical `a/b` (or `a` when b = 1) representation.
inline std::string to_string(const Rational& q) { return q.get_str(10); }

inline Rational rational_pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

}  // namespace jetcalc
