#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace dsirs {

/// Exact rational over arbitrary-precision integers. Always canonical.
using Rational = mpq_class;

Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// "num/den" with den >= 1; integers still print as "n/1".
std::string to_fraction_string(const Rational& value);

/// Accepts "num/den", an integer, or a plain decimal such as "0.1" or "1e-2".
/// Throws Error(ParseError).
Rational parse_rational(std::string_view text);

/// Decimal rendering with the given number of significant digits.
std::string to_decimal_string(const Rational& value, int significant_digits);

/// A nonnegative rational extended with +infinity. Used for welfare ratios
/// where a zero denominator is meaningful.
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(Rational value) : value_(std::move(value)) {}  // NOLINT

  static ExtRational infinity() {
    ExtRational r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const noexcept { return infinite_; }
  /// Only meaningful when finite.
  const Rational& value() const noexcept { return value_; }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.infinite_ || b.infinite_) {
      return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
    }
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// "num/den" or "inf".
  std::string to_string() const;

 private:
  Rational value_{0};
  bool infinite_ = false;
};

}  // namespace dsirs
