#include "mel/rational.hpp"

#include <cctype>
#include <limits>

namespace mel {

std::optional<Rational> parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;
  bool seen_digit = false;
  bool seen_point = false;
  constexpr std::int64_t kLimit = std::numeric_limits<std::int64_t>::max() / 10;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    if (numerator > kLimit || denominator > kLimit) return std::nullopt;
    numerator = numerator * 10 + (c - '0');
    if (seen_point) denominator *= 10;
    seen_digit = true;
  }
  if (!seen_digit || text.back() == '.') return std::nullopt;
  return Rational(negative ? -numerator : numerator, denominator);
}

std::string to_decimal_string(const Rational& value) {
  std::int64_t num = value.numerator();
  std::int64_t den = value.denominator();
  std::int64_t rest = den;
  int twos = 0;
  int fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) return std::to_string(num) + "/" + std::to_string(den);

  int digits = std::max(twos, fives);
  // Scale numerator so that the value is num_scaled / 10^digits.
  std::int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  std::int64_t scaled = num * (scale / den);
  bool negative = scaled < 0;
  std::string magnitude = std::to_string(negative ? -scaled : scaled);
  if (digits > 0) {
    if (static_cast<int>(magnitude.size()) <= digits) {
      magnitude.insert(0, static_cast<std::size_t>(digits) - magnitude.size() + 1, '0');
    }
    magnitude.insert(magnitude.size() - static_cast<std::size_t>(digits), ".");
  }
  return negative ? "-" + magnitude : magnitude;
}

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

}  // namespace mel
