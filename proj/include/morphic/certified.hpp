#pragma once

// Certified floor/ceiling of monotone transcendental expressions.
//
// An expression is evaluated twice, once with every operation rounded down and
// once rounded up, giving an enclosing interval. Precision is doubled until
// both endpoints share the same integer part.

#include <cstdint>
#include <cstdlib>
#include <memory>
#include <string>

#include <gmp.h>
#include <mpfr.h>

#include "morphic/core.hpp"

namespace morphic::certified {

class Real {
 public:
  explicit Real(mpfr_prec_t prec) { mpfr_init2(value_, prec); }
  ~Real() { mpfr_clear(value_); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }

 private:
  mpfr_t value_;
};

namespace detail {

inline BigInt to_bigint(mpfr_srcptr v, mpfr_rnd_t rnd) {
  mpz_t z;
  mpz_init(z);
  mpfr_get_z(z, v, rnd);
  std::unique_ptr<char, void (*)(void*)> text(mpz_get_str(nullptr, 10, z), free);
  mpz_clear(z);
  return BigInt(text.get());
}

template <class Expr>
BigInt certify(Expr&& expr, mpfr_rnd_t integer_rounding) {
  for (mpfr_prec_t prec = 64; prec <= 65536; prec *= 2) {
    Real lo(prec);
    Real hi(prec);
    expr(lo.get(), MPFR_RNDD);
    expr(hi.get(), MPFR_RNDU);
    BigInt a = to_bigint(lo.get(), integer_rounding);
    BigInt b = to_bigint(hi.get(), integer_rounding);
    if (a == b) return a;
  }
  throw ResourceLimitError("could not certify the integer part of a transcendental expression");
}

}  // namespace detail

/// Floor of a monotone expression `expr(out, rnd)`. Every operation inside
/// `expr` must round in direction `rnd`, and the expression must be
/// nondecreasing in each intermediate value.
template <class Expr>
BigInt floor_of(Expr&& expr) {
  return detail::certify(std::forward<Expr>(expr), MPFR_RNDD);
}

template <class Expr>
BigInt ceil_of(Expr&& expr) {
  return detail::certify(std::forward<Expr>(expr), MPFR_RNDU);
}

/// out = sqrt(c * n * ln n), rounded in direction rnd. Requires n >= 2.
inline void sqrt_c_n_log_n(mpfr_ptr out, unsigned c, unsigned n, mpfr_rnd_t rnd) {
  mpfr_set_ui(out, n, rnd);
  mpfr_log(out, out, rnd);
  mpfr_mul_ui(out, out, static_cast<unsigned long>(c) * n, rnd);
  mpfr_sqrt(out, out, rnd);
}

inline void set_bigint(mpfr_ptr out, const BigInt& v, mpfr_rnd_t rnd) {
  mpfr_set_str(out, v.str().c_str(), 10, rnd);
}

}  // namespace morphic::certified
