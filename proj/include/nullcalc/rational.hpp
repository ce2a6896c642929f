#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace nullcalc {

using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den = 1) { return Rational(num, den); }

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

// Parses "p", "-p", "p/q".  Throws std::invalid_argument.
Rational parse_rational(const std::string& text);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace nullcalc
