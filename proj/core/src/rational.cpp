#include "dsirs/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "dsirs/errors.hpp"

namespace dsirs {

Rational make_rational(std::int64_t num, std::int64_t den) {
  mpz_class n;
  mpz_class d;
  mpz_set_si(n.get_mpz_t(), static_cast<long>(num));
  mpz_set_si(d.get_mpz_t(), static_cast<long>(den));
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_fraction_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw Error(ErrorKind::ParseError, "not an integer: '" + std::string(s) + "'");
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorKind::ParseError, "empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash));
    mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    const mpz_class exp_value = parse_integer(text.substr(e + 1));
    if (!exp_value.fits_slong_p() || abs(exp_value) > 1000) {
      throw Error(ErrorKind::ParseError, "exponent out of range in '" + std::string(text) + "'");
    }
    exponent = exp_value.get_si();
  }

  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long fraction_digits = 0;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    const auto whole = mantissa.substr(0, dot);
    const auto frac = mantissa.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw Error(ErrorKind::ParseError, "not a number: '" + std::string(text) + "'");
    }
    digits = std::string(whole) + std::string(frac);
    fraction_digits = static_cast<long>(frac.size());
  } else {
    if (!all_digits(mantissa)) throw Error(ErrorKind::ParseError, "not a number: '" + std::string(text) + "'");
    digits = std::string(mantissa);
  }

  mpz_class num(digits, 10);
  if (negative) num = -num;
  const long scale = exponent - fraction_digits;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational r = scale < 0 ? Rational(num, pow10) : Rational(num * pow10, 1);
  r.canonicalize();
  return r;
}

std::string to_decimal_string(const Rational& value, int significant_digits) {
  // mpf with ample precision, then printf-style rounding to the requested digits.
  mpf_class f(value, 256);
  char* raw = nullptr;
  gmp_asprintf(&raw, "%.*Fg", significant_digits, f.get_mpf_t());
  std::string out(raw);
  void (*free_fn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &free_fn);
  free_fn(raw, out.size() + 1);
  return out;
}

std::string ExtRational::to_string() const {
  return infinite_ ? std::string("inf") : to_fraction_string(value_);
}

}  // namespace dsirs
