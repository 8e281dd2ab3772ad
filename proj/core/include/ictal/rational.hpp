#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>

namespace ictal {

// Non-negative rational number kept in lowest terms. Used for sample rates so
// that durations and samples-per-window are exact.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const auto g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  constexpr double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  constexpr bool is_integer() const { return den == 1; }
  constexpr bool positive() const { return num > 0 && den > 0; }

  friend constexpr Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }
  friend constexpr Rational operator/(Rational a, Rational b) { return Rational(a.num * b.den, a.den * b.num); }
  friend constexpr bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
};

// Parses a plain decimal such as "1", "0.25" or "2.5" exactly.
std::optional<Rational> parse_decimal_rational(std::string_view text);
std::string to_string(Rational r);

}  // namespace ictal
