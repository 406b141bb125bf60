#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace rayleigh {

// Exact coefficient arithmetic. Every finite double is a dyadic rational, so
// values entering through the CLI stay exact as well.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact conversion; throws std::invalid_argument for NaN/inf.
Rational rational_from_double(double x);

double to_double(const Rational& r);

/// Decimal string when the reduced denominator is of the form 2^s 5^t
/// ("0.5", "-3", "1.25"), otherwise "num/den" ("1/3").
std::string rational_to_string(const Rational& r);

/// Parses the formats produced by rational_to_string plus plain integers.
Rational rational_from_string(const std::string& s);

}  // namespace rayleigh
