#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace mel {

using Rational = boost::rational<std::int64_t>;

// Parses "3", "-0.75", "12.5". Returns nullopt on anything else.
std::optional<Rational> parse_decimal(std::string_view text);

// Exact decimal rendering when the denominator divides a power of ten
// ("2.2", "-0.5", "3"), otherwise "n/d".
std::string to_decimal_string(const Rational& value);

double to_double(const Rational& value);

/// Statement weight: a finite rational or the distinguished INFINITE value
/// that marks deterministic (hard) knowledge.
class Weight {
 public:
  Weight() = default;
  Weight(Rational value) : value_(value) {}  // NOLINT: implicit on purpose
  static Weight infinite() {
    Weight w;
    w.infinite_ = true;
    return w;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  // Precondition: is_finite().
  const Rational& value() const { return value_; }

  std::string to_string() const {
    return infinite_ ? std::string("INFINITE") : to_decimal_string(value_);
  }

  friend bool operator==(const Weight& a, const Weight& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  bool infinite_ = false;
  Rational value_{0};
};

}  // namespace mel
