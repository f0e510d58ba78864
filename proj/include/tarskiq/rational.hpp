#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace tarskiq {

// boost 1.74 recurses forever on `rational == int` under C++20 rewritten
// comparisons; compare against Rational(...) or numerator() instead.
using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& r);

// Accepts "p", "-p" and "p/q".
Rational parse_rational(const std::string& text);

// Nearest integer, ties broken towards the larger result.
std::int64_t round_half_up(const Rational& x);

}  // namespace tarskiq
