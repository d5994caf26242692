#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace fractlang {

// Exact rational, always normalised (lowest terms, positive denominator).
using Rational = boost::multiprecision::cpp_rational;

// Parses `p/q`, a decimal such as `0.25`, or an integer. A leading '-' is
// accepted so that callers can report a range error instead of a syntax error.
// Returns false on malformed input or a zero denominator.
bool parse_rational(std::string_view text, Rational& out);

// `p/q`, or just `p` when the denominator is 1.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

}  // namespace fractlang
