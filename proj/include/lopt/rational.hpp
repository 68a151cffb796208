#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>

namespace lopt {

/// Exact rational backed by GMP. mpq_class keeps values canonical (lowest
/// terms, positive denominator) across all arithmetic.
using Rational = mpq_class;

/// Parses "p/q", "p" or "-p/q" (decimal integers). Throws Error(InvalidConfig)
/// on malformed text or a zero denominator.
Rational parse_rational(const std::string& text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

/// Total number of limbs used by numerator and denominator, in bytes.
std::size_t storage_bytes(const Rational& q);

Rational factorial(unsigned long k);

/// (2p - 1)!! with (-1)!! = 1.
mpz_class double_factorial_odd(unsigned long p);

}  // namespace lopt
