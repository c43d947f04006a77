#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>

namespace clugame {

// All core arithmetic is exact. Floating point appears only in experiment
// summaries and never in a bound comparison.
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Parses "p/q" or a plain integer literal. Throws Error(ParseError) on
// anything else (decimal floats are rejected on purpose).
Rat parse_rat(const std::string& text);

// "p/q" form, q > 0, always with the slash ("3" -> "3/1").
std::string format_rat(const Rat& value);

// Integer form when the denominator is 1, "p/q" otherwise.
std::string format_rat_compact(const Rat& value);

std::optional<std::int64_t> to_int64(const BigInt& value);

double to_double(const Rat& value);

inline Rat rat_abs(const Rat& v) { return v < 0 ? Rat(-v) : v; }

}  // namespace clugame
