#pragma once

// Integer evaluation of a plan under its derived revenue share. With q
// derived, each welfare is an integer or a half-integer, so doubling makes
// every quantity integral and comparisons exact in 128-bit arithmetic.

#include <cstdint>

#include "dsirs/detail/int128.hpp"
#include "dsirs/invariants.hpp"
#include "dsirs/rational.hpp"

namespace dsirs::detail {

struct DoubledWelfare {
  std::int64_t w1x2 = 0;
  std::int64_t w2x2 = 0;
  // q = q_num / q_den; q_den is 2P, or 1 when nothing is sold.
  std::int64_t q_num = 0;
  std::int64_t q_den = 1;

  bool feasible() const noexcept { return w1x2 > 0 && w2x2 > 0; }
  std::int64_t d_x2() const noexcept { return w1x2 > w2x2 ? w1x2 - w2x2 : w2x2 - w1x2; }
  std::int64_t hi() const noexcept { return w1x2 > w2x2 ? w1x2 : w2x2; }
  std::int64_t lo() const noexcept { return w1x2 > w2x2 ? w2x2 : w1x2; }

  /// Compares rho = hi/lo of two feasible evaluations: negative, zero, positive.
  friend int compare_rho(const DoubledWelfare& a, const DoubledWelfare& b) noexcept {
    const Int128 lhs = static_cast<Int128>(a.hi()) * b.lo();
    const Int128 rhs = static_cast<Int128>(b.hi()) * a.lo();
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }
  friend int compare_nash(const DoubledWelfare& a, const DoubledWelfare& b) noexcept {
    const Int128 lhs = static_cast<Int128>(a.w1x2) * a.w2x2;
    const Int128 rhs = static_cast<Int128>(b.w1x2) * b.w2x2;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }

  Rational rho() const {
    Rational r(mpz_class(static_cast<long>(hi())), mpz_class(static_cast<long>(lo())));
    r.canonicalize();
    return r;
  }
  Rational d() const {
    Rational r(mpz_class(static_cast<long>(d_x2())), mpz_class(2));
    r.canonicalize();
    return r;
  }
};

/// u1 = u1(S1), u2 = u2(S2), price = p(S0).
inline DoubledWelfare evaluate_doubled(std::int64_t u1, std::int64_t u2, std::int64_t price) {
  DoubledWelfare out;
  if (price == 0) {
    out.w1x2 = 2 * u1;
    out.w2x2 = 2 * u2;
  } else {
    std::int64_t num = price - u1 + u2;
    if (num < 0) num = 0;
    if (num > 2 * price) num = 2 * price;
    // 2*q*P = num
    out.q_num = num;
    out.q_den = 2 * price;
    out.w1x2 = 2 * u1 + num;
    out.w2x2 = 2 * u2 + 2 * price - num;
  }
  if (out.feasible()) record_equitability_check(out.w1x2 == out.w2x2, out.w1x2 == out.w2x2);
  return out;
}

}  // namespace dsirs::detail
