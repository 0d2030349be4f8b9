#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace levylab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact rational value of a finite double (every finite double is dyadic).
Rational rational_from_double(double x);

// Parses "p/q", an integer, or a decimal with optional exponent ("-1.25e-3")
// into an exact rational. Returns nullopt on malformed input or q == 0.
std::optional<Rational> parse_rational(std::string_view s);

double to_double(const Rational& r);

// gcd extended to rationals: largest g with a, b both integer multiples of g.
Rational rational_gcd(const Rational& a, const Rational& b);

bool is_integer(const Rational& r);

// "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rational& r);

}  // namespace levylab
