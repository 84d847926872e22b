#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace brackets {

using Rational = mpq_class;

// mpq_class(p, q) is not reduced on construction; every entry point that stores a
// caller's rational goes through this.
inline Rational reduced(Rational r) {
  r.canonicalize();
  return r;
}

// Accepts "3", "-3/2", "1.25", "2.5e-3".
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

bool is_integer(const Rational& r);
mpz_class floor_of(const Rational& r);
// Throws DomainError when r is not an integer that fits in a long.
long to_long(const Rational& r);
long double to_long_double(const Rational& r);

Rational rpow(const Rational& base, long exponent);
Rational factorial(unsigned long n);
// Exact n-th root of a nonnegative rational, when one exists.
std::optional<Rational> exact_root(const Rational& value, unsigned long n);

}  // namespace brackets
