#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>

namespace foliate {

using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
bool is_integer(const Rational& r);
Rational factorial(int n);
// Rational power with integer exponent; 0^negative throws "evaluation-domain".
Rational rational_pow(const Rational& base, int exponent);
// Exact square root when numerator and denominator are perfect squares.
bool exact_sqrt(const Rational& r, Rational& root);
std::size_t hash_rational(const Rational& r);

}  // namespace foliate
