#include "clugame/rational.hpp"

#include <cctype>

#include "clugame/errors.hpp"

namespace clugame {

namespace {

bool valid_integer_literal(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rat parse_rat(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!valid_integer_literal(text)) {
      throw Error(ErrorCode::ParseError,
                  "expected integer or p/q rational, got '" + text + "'");
    }
    return Rat(BigInt(text));
  }
  std::string num = text.substr(0, slash);
  std::string den = text.substr(slash + 1);
  if (!valid_integer_literal(num) || !valid_integer_literal(den)) {
    throw Error(ErrorCode::ParseError, "bad rational literal '" + text + "'");
  }
  BigInt d(den);
  if (d == 0) {
    throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
  }
  return Rat(BigInt(num), d);
}

std::string format_rat(const Rat& value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

std::string format_rat_compact(const Rat& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return format_rat(value);
}

std::optional<std::int64_t> to_int64(const BigInt& value) {
  static const BigInt kMin = std::numeric_limits<std::int64_t>::min();
  static const BigInt kMax = std::numeric_limits<std::int64_t>::max();
  if (value < kMin || value > kMax) return std::nullopt;
  return value.convert_to<std::int64_t>();
}

double to_double(const Rat& value) { return value.convert_to<double>(); }

}  // namespace clugame
