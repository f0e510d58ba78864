#include "tarskiq/rational.hpp"

#include <charconv>

#include "tarskiq/error.hpp"

namespace tarskiq {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {
std::int64_t parse_int(std::string_view s, const std::string& whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    invalid_argument("malformed rational '" + whole + "'");
  }
  return v;
}
}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text, text));
  const auto num = parse_int(std::string_view(text).substr(0, slash), text);
  const auto den = parse_int(std::string_view(text).substr(slash + 1), text);
  if (den == 0) invalid_argument("zero denominator in '" + text + "'");
  return Rational(num, den);
}

std::int64_t round_half_up(const Rational& x) {
  // floor(x + 1/2); boost::rational keeps the denominator positive.
  const Rational shifted = x + Rational(1, 2);
  std::int64_t q = shifted.numerator() / shifted.denominator();
  if (shifted.numerator() % shifted.denominator() != 0 && shifted.numerator() < 0) --q;
  return q;
}

}  // namespace tarskiq
