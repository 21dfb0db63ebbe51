#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace multipoint {

using Integer = mpz_class;

/// Arbitrary-precision rational, always kept in canonical form
/// (gcd(|num|, den) = 1, den > 0).
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// "3", "-7/2". Throws ValidationError on malformed text or zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text: integers print bare, others as "p/q".
std::string to_string(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace multipoint
