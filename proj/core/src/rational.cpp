#include "ictal/rational.hpp"

namespace ictal {

std::optional<Rational> parse_decimal_rational(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool seen_dot = false;
  bool seen_digit = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    if (num > (INT64_MAX - 9) / 10 || (seen_dot && den > INT64_MAX / 10)) return std::nullopt;
    num = num * 10 + (c - '0');
    if (seen_dot) den *= 10;
    seen_digit = true;
  }
  if (!seen_digit) return std::nullopt;
  return Rational(num, den);
}

std::string to_string(Rational r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

}  // namespace ictal
