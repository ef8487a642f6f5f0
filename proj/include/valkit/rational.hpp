#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace valkit {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "n", "-n", "n/d" (whitespace around the tokens is ignored).
/// Throws Error(ParseError) on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical short form: "3", "-1/4".
std::string to_string(const Rational& q);

/// Always "num/den", e.g. "3/1". Used by structured reports.
std::string to_fraction_string(const Rational& q);

/// Exponent of p in a nonzero rational.
long padic_exponent(const Rational& q, unsigned long p);
long padic_exponent(const Integer& z, unsigned long p);

Rational pow(const Rational& base, long exponent);

bool is_prime(unsigned long p);

}  // namespace valkit
