#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "simquad/errors.hpp"

namespace simquad {

class ExtReal;

/// Working precision for one computation: `digits` requested decimal digits
/// plus `guard` extra internal digits. All arithmetic runs at digits+guard
/// decimal digits; results are reported rounded to `digits`.
class PrecisionContext {
public:
  static constexpr int kDefaultGuard = 20;

  explicit PrecisionContext(int digits, int guard = kDefaultGuard);

  int digits() const noexcept { return digits_; }
  int guard() const noexcept { return guard_; }
  int working_digits() const noexcept { return digits_ + guard_; }
  mpfr_prec_t working_bits() const noexcept { return bits_; }

  ExtReal real(long value) const;
  ExtReal real(const std::string& decimal) const;
  ExtReal zero() const;

  // 10^e at working precision; e may be negative (used for tolerances).
  ExtReal pow10(long e) const;

private:
  int digits_;
  int guard_;
  mpfr_prec_t bits_;
};

/// Arbitrary-precision real. Each value carries its own precision; binary
/// operations round to the wider operand's precision. The decimal exponent
/// range is MPFR's (far beyond 1e9), so no rescaling is ever needed.
class ExtReal {
public:
  ExtReal();
  explicit ExtReal(mpfr_prec_t bits);
  ExtReal(const ExtReal& other);
  ExtReal(ExtReal&& other) noexcept;
  ExtReal& operator=(const ExtReal& other);
  ExtReal& operator=(ExtReal&& other) noexcept;
  ~ExtReal();

  static ExtReal from_long(long value, mpfr_prec_t bits);
  static ExtReal from_double(double value, mpfr_prec_t bits);
  // Parses a decimal string ("-1.5e-3", "42"); rejects trailing junk.
  static ExtReal from_string(const std::string& decimal, mpfr_prec_t bits);

  mpfr_prec_t bits() const noexcept { return mpfr_get_prec(v_); }
  mpfr_srcptr raw() const noexcept { return v_; }
  mpfr_ptr raw() noexcept { return v_; }

  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(v_) != 0; }
  bool is_integer() const noexcept { return mpfr_integer_p(v_) != 0; }
  int sign() const noexcept { return mpfr_sgn(v_); }

  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }

  // Scientific decimal string with `significant` digits: "d.dd...e+X".
  // Round-trips: parsing the string at >= the source's working precision
  // and re-serializing at the same digit count reproduces it byte for byte.
  std::string sci(int significant) const;
  // Fixed-point decimal string with `fractional` digits after the point.
  std::string fixed(int fractional, mpfr_rnd_t rnd = MPFR_RNDN) const;

  ExtReal& operator+=(const ExtReal& rhs);
  ExtReal& operator-=(const ExtReal& rhs);
  ExtReal& operator*=(const ExtReal& rhs);
  ExtReal& operator/=(const ExtReal& rhs);

  friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator-(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator*(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator/(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator-(const ExtReal& a);

  friend ExtReal operator+(const ExtReal& a, long b);
  friend ExtReal operator-(const ExtReal& a, long b);
  friend ExtReal operator*(const ExtReal& a, long b);
  friend ExtReal operator/(const ExtReal& a, long b);
  friend ExtReal operator*(long a, const ExtReal& b);

  // Exact comparisons (independent of precision).
  friend bool operator==(const ExtReal& a, const ExtReal& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const ExtReal& a, const ExtReal& b) { return mpfr_cmp(a.v_, b.v_) != 0; }
  friend bool operator<(const ExtReal& a, const ExtReal& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

private:
  mpfr_t v_;
};

ExtReal abs(const ExtReal& x);
ExtReal sqrt(const ExtReal& x);
ExtReal exp(const ExtReal& x);
ExtReal pow(const ExtReal& base, const ExtReal& exponent);
ExtReal pow_ui(const ExtReal& base, unsigned long e);
const ExtReal& max(const ExtReal& a, const ExtReal& b);
const ExtReal& min(const ExtReal& a, const ExtReal& b);

/// Gamma function for x > 0, correct to the context's reported digits.
/// Integer and half-integer arguments short-circuit to the exact
/// factorial / sqrt(pi) products.
ExtReal gamma(const ExtReal& x, const PrecisionContext& ctx);
ExtReal gamma(long x, const PrecisionContext& ctx);

/// e^(-x) for finite x.
ExtReal exp_neg(const ExtReal& x, const PrecisionContext& ctx);

/// cos(x) for finite x.
ExtReal cos_fn(const ExtReal& x, const PrecisionContext& ctx);

}  // namespace simquad
