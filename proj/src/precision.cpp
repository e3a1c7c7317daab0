#include "simquad/precision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace simquad {

namespace {

// bits needed for `digits` decimal digits, with a small safety margin
mpfr_prec_t bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
}

}  // namespace

PrecisionContext::PrecisionContext(int digits, int guard) : digits_(digits), guard_(guard) {
  if (digits < 10) throw DomainError("PrecisionContext: digits must be at least 10");
  if (guard < 0) throw DomainError("PrecisionContext: guard must be non-negative");
  bits_ = bits_for_digits(digits_ + guard_);
}

ExtReal PrecisionContext::real(long value) const { return ExtReal::from_long(value, bits_); }

ExtReal PrecisionContext::real(const std::string& decimal) const {
  return ExtReal::from_string(decimal, bits_);
}

ExtReal PrecisionContext::zero() const { return ExtReal(bits_); }

ExtReal PrecisionContext::pow10(long e) const {
  ExtReal r(bits_);
  mpfr_ui_pow_ui(r.raw(), 10u, static_cast<unsigned long>(e < 0 ? -e : e), MPFR_RNDN);
  if (e < 0) mpfr_ui_div(r.raw(), 1u, r.raw(), MPFR_RNDN);
  return r;
}

ExtReal::ExtReal() { mpfr_init2(v_, 64); mpfr_set_zero(v_, 1); }

ExtReal::ExtReal(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }

ExtReal::ExtReal(const ExtReal& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

ExtReal::ExtReal(ExtReal&& other) noexcept {
  mpfr_init2(v_, 64);
  mpfr_swap(v_, other.v_);
}

ExtReal& ExtReal::operator=(const ExtReal& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

ExtReal& ExtReal::operator=(ExtReal&& other) noexcept {
  if (this != &other) mpfr_swap(v_, other.v_);
  return *this;
}

ExtReal::~ExtReal() { mpfr_clear(v_); }

ExtReal ExtReal::from_long(long value, mpfr_prec_t bits) {
  ExtReal r(bits);
  mpfr_set_si(r.v_, value, MPFR_RNDN);
  return r;
}

ExtReal ExtReal::from_double(double value, mpfr_prec_t bits) {
  ExtReal r(bits);
  mpfr_set_d(r.v_, value, MPFR_RNDN);
  return r;
}

ExtReal ExtReal::from_string(const std::string& decimal, mpfr_prec_t bits) {
  ExtReal r(bits);
  const char* s = decimal.c_str();
  char* end = nullptr;
  mpfr_strtofr(r.v_, s, &end, 10, MPFR_RNDN);
  if (end == s || *end != '\0')
    throw DomainError("ExtReal: not a decimal number: \"" + decimal + "\"");
  return r;
}

std::string ExtReal::sci(int significant) const {
  if (significant < 1) significant = 1;
  if (!is_finite()) return mpfr_nan_p(v_) ? "nan" : (sign() < 0 ? "-inf" : "inf");
  if (is_zero()) return "0";
  mpfr_exp_t e = 0;
  char* digits = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(significant), v_, MPFR_RNDN);
  std::string d(digits);
  mpfr_free_str(digits);
  std::string sgn;
  if (d[0] == '-') { sgn = "-"; d.erase(0, 1); }
  // value = 0.d1d2... * 10^e  ->  d1.d2... * 10^(e-1)
  std::string out = sgn + d.substr(0, 1);
  if (d.size() > 1) out += "." + d.substr(1);
  long ee = static_cast<long>(e) - 1;
  out += "e";
  out += (ee < 0 ? "-" : "+");
  out += std::to_string(ee < 0 ? -ee : ee);
  return out;
}

std::string ExtReal::fixed(int fractional, mpfr_rnd_t rnd) const {
  if (!is_finite()) return mpfr_nan_p(v_) ? "nan" : (sign() < 0 ? "-inf" : "inf");
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*R*f", fractional, rnd, v_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

namespace {
inline mpfr_prec_t wider(const ExtReal& a, const ExtReal& b) {
  return std::max(a.bits(), b.bits());
}
}  // namespace

ExtReal& ExtReal::operator+=(const ExtReal& rhs) { return *this = *this + rhs; }
ExtReal& ExtReal::operator-=(const ExtReal& rhs) { return *this = *this - rhs; }
ExtReal& ExtReal::operator*=(const ExtReal& rhs) { return *this = *this * rhs; }
ExtReal& ExtReal::operator/=(const ExtReal& rhs) { return *this = *this / rhs; }

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
  ExtReal r(wider(a, b));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

ExtReal operator-(const ExtReal& a, const ExtReal& b) {
  ExtReal r(wider(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

ExtReal operator*(const ExtReal& a, const ExtReal& b) {
  ExtReal r(wider(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

ExtReal operator/(const ExtReal& a, const ExtReal& b) {
  ExtReal r(wider(a, b));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

ExtReal operator-(const ExtReal& a) {
  ExtReal r(a.bits());
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}

ExtReal operator+(const ExtReal& a, long b) {
  ExtReal r(a.bits());
  mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

ExtReal operator-(const ExtReal& a, long b) {
  ExtReal r(a.bits());
  mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

ExtReal operator*(const ExtReal& a, long b) {
  ExtReal r(a.bits());
  mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

ExtReal operator/(const ExtReal& a, long b) {
  ExtReal r(a.bits());
  mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

ExtReal operator*(long a, const ExtReal& b) { return b * a; }

ExtReal abs(const ExtReal& x) {
  ExtReal r(x.bits());
  mpfr_abs(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

ExtReal sqrt(const ExtReal& x) {
  ExtReal r(x.bits());
  mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

ExtReal exp(const ExtReal& x) {
  ExtReal r(x.bits());
  mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

ExtReal pow(const ExtReal& base, const ExtReal& exponent) {
  ExtReal r(std::max(base.bits(), exponent.bits()));
  mpfr_pow(r.raw(), base.raw(), exponent.raw(), MPFR_RNDN);
  return r;
}

ExtReal pow_ui(const ExtReal& base, unsigned long e) {
  ExtReal r(base.bits());
  mpfr_pow_ui(r.raw(), base.raw(), e, MPFR_RNDN);
  return r;
}

const ExtReal& max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }
const ExtReal& min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }

ExtReal gamma(const ExtReal& x, const PrecisionContext& ctx) {
  if (!x.is_finite() || x.sign() <= 0)
    throw DomainError("gamma: argument must be a positive real");
  const mpfr_prec_t bits = ctx.working_bits();
  ExtReal r(bits);
  if (x.is_integer() && mpfr_cmp_ui(x.raw(), 1000000u) <= 0) {
    unsigned long n = mpfr_get_ui(x.raw(), MPFR_RNDN);
    mpfr_fac_ui(r.raw(), n - 1, MPFR_RNDN);  // Gamma(n) = (n-1)!
    return r;
  }
  ExtReal twice = x * 2L;
  if (twice.is_integer() && mpfr_cmp_ui(twice.raw(), 2000000u) <= 0) {
    // half-integer: Gamma(x) = sqrt(pi) * (x-1)(x-2)...(1/2)
    ExtReal prod = ExtReal::from_long(1, bits);
    ExtReal y(bits);
    mpfr_set(y.raw(), x.raw(), MPFR_RNDN);
    while (mpfr_cmp_ui(y.raw(), 1u) > 0) {
      y = y - 1L;
      prod *= y;
    }
    ExtReal pi(bits);
    mpfr_const_pi(pi.raw(), MPFR_RNDN);
    return prod * sqrt(pi);
  }
  ExtReal xw(bits);
  mpfr_set(xw.raw(), x.raw(), MPFR_RNDN);
  mpfr_gamma(r.raw(), xw.raw(), MPFR_RNDN);
  return r;
}

ExtReal gamma(long x, const PrecisionContext& ctx) {
  return gamma(ctx.real(x), ctx);
}

ExtReal exp_neg(const ExtReal& x, const PrecisionContext& ctx) {
  if (!x.is_finite()) throw DomainError("exp_neg: argument must be finite");
  ExtReal r(ctx.working_bits());
  mpfr_neg(r.raw(), x.raw(), MPFR_RNDN);
  mpfr_exp(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}

ExtReal cos_fn(const ExtReal& x, const PrecisionContext& ctx) {
  if (!x.is_finite()) throw DomainError("cos_fn: argument must be finite");
  ExtReal r(ctx.working_bits());
  mpfr_cos(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

}  // namespace simquad
