#pragma once

#include <gmpxx.h>

#include <string>

#include "qes/errors.hpp"

namespace qes {

using Integer = mpz_class;
/// Arbitrary-precision rational, always canonical (lowest terms, den > 0).
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw UsageError("rational with zero denominator");
  Rational r{Integer(num), Integer(den)};
  r.canonicalize();
  return r;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw UsageError("rational with zero denominator");
  Rational r{num, den};
  r.canonicalize();
  return r;
}

/// Parses "p", "p/q" or a plain decimal such as "-0.125" exactly.
inline Rational parse_rational(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    Rational r;
    if (r.set_str(text, 10) != 0) throw UsageError("not a rational: " + text);
    r.canonicalize();
    if (r.get_den() == 0) throw UsageError("zero denominator: " + text);
    return r;
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  if (digits.empty() || digits == "-" || digits == "+") throw UsageError("not a number: " + text);
  Integer num;
  if (num.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0) {
    throw UsageError("not a number: " + text);
  }
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, text.size() - dot - 1);
  return make_rational(num, den);
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

/// Rational rounded to long double through a 128-bit intermediate.
inline long double to_long_double(const Rational& r) {
  mpf_class f(0, 128);
  f = r;
  const double hi = f.get_d();
  mpf_class rest(0, 128);
  rest = f - mpf_class(hi, 128);
  return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

}  // namespace qes
