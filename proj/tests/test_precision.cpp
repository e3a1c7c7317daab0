#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "simquad/precision.hpp"

using namespace simquad;
using simquad::testing::close;
using simquad::testing::rel_err;

TEST_CASE("context validates digits and guard") {
  CHECK_THROWS_AS(PrecisionContext(9), DomainError);
  CHECK_THROWS_AS(PrecisionContext(20, -1), DomainError);
  PrecisionContext ctx(10);
  CHECK(ctx.guard() == 20);
  CHECK(ctx.working_digits() == 30);
  CHECK(ctx.working_bits() >= 100);
}

TEST_CASE("string parsing accepts decimals and rejects junk") {
  PrecisionContext ctx(30);
  CHECK(ctx.real("1.5") * 2L == ctx.real(3));
  CHECK(ctx.real("-2.5e3") == ctx.real(-2500));
  CHECK_THROWS_AS(ctx.real("1.5x"), DomainError);
  CHECK_THROWS_AS(ctx.real(""), DomainError);
}

TEST_CASE("serialization round-trips at the requested digits") {
  PrecisionContext ctx(35);
  std::mt19937_64 rng(20240901);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-40, 40);
  for (int i = 0; i < 300; ++i) {
    ExtReal x = ExtReal::from_double(mant(rng), ctx.working_bits()) * ctx.pow10(expo(rng));
    std::string s = x.sci(ctx.digits());
    ExtReal y = ctx.real(s);
    CHECK(y.sci(ctx.digits()) == s);
  }
  CHECK(ctx.zero().sci(ctx.digits()) == "0");
  CHECK(ctx.real("0").sci(10) == "0");
}

TEST_CASE("fixed formatting rounds and truncates on request") {
  PrecisionContext ctx(40);
  ExtReal x = ctx.real("0.123456789");
  CHECK(x.fixed(5) == "0.12346");
  CHECK(x.fixed(5, MPFR_RNDZ) == "0.12345");
  CHECK(ctx.real(-4).fixed(2) == "-4.00");
}

TEST_CASE("gamma at small exact points") {
  PrecisionContext ctx(30);
  CHECK(gamma(1, ctx) == ctx.real(1));
  CHECK(gamma(3, ctx) == ctx.real(2));
  // sqrt(pi) to 20 fractional digits
  CHECK(gamma(ctx.real("0.5"), ctx).fixed(20) == "1.77245385090551602730");
}

TEST_CASE("gamma equals the exact factorial at integers") {
  // the oracle builds (n-1)! exactly in wide arithmetic, then rounds once
  for (int digits : {10, 40}) {
    PrecisionContext ctx(digits);
    for (long n = 1; n <= 50; ++n) {
      ExtReal exact = ExtReal::from_long(1, 1500);
      for (long k = 2; k < n; ++k) exact *= k;  // products stay exact at 1500 bits
      ExtReal rounded(ctx.working_bits());
      mpfr_set(rounded.raw(), exact.raw(), MPFR_RNDN);
      CHECK(gamma(n, ctx) == rounded);
    }
  }
}

TEST_CASE("gamma functional equation at random arguments") {
  for (int digits : {15, 60}) {
    PrecisionContext ctx(digits);
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> dist(0.1, 50.0);
    ExtReal tol = ctx.pow10(-digits + 2);
    for (int i = 0; i < 100; ++i) {
      ExtReal x = ExtReal::from_double(dist(rng), ctx.working_bits());
      ExtReal lhs = gamma(x + 1L, ctx);
      ExtReal rhs = x * gamma(x, ctx);
      CHECK(rel_err(lhs, rhs) <= tol);
    }
  }
}

TEST_CASE("gamma rejects non-positive arguments") {
  PrecisionContext ctx(20);
  CHECK_THROWS_AS(gamma(ctx.real(0), ctx), DomainError);
  CHECK_THROWS_AS(gamma(ctx.real(-3), ctx), DomainError);
  CHECK_THROWS_AS(gamma(ctx.real("-0.5"), ctx), DomainError);
}

TEST_CASE("exponential and cosine evaluations") {
  PrecisionContext ctx(30);
  CHECK(exp_neg(ctx.zero(), ctx) == ctx.real(1));
  CHECK(cos_fn(ctx.zero(), ctx) == ctx.real(1));
  CHECK(exp_neg(ctx.real(1), ctx).fixed(20) == "0.36787944117144232160");
  // cos(pi) = -1 as a cross-library sanity point
  ExtReal pi(ctx.working_bits());
  mpfr_const_pi(pi.raw(), MPFR_RNDN);
  CHECK(close(cos_fn(pi, ctx), ctx.real(-1), -ctx.working_digits() + 3, ctx));
}

TEST_CASE("doubling the guard leaves the reported digits unchanged") {
  const int digits = 25;
  PrecisionContext base(digits, 20), wide(digits, 40);
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> dist(0.05, 60.0);
  for (int i = 0; i < 40; ++i) {
    double t = dist(rng);
    ExtReal xb = ExtReal::from_double(t, base.working_bits());
    ExtReal xw = ExtReal::from_double(t, wide.working_bits());
    CHECK(gamma(xb, base).sci(digits) == gamma(xw, wide).sci(digits));
    CHECK(exp_neg(xb, base).sci(digits) == exp_neg(xw, wide).sci(digits));
    CHECK(cos_fn(xb, base).sci(digits) == cos_fn(xw, wide).sci(digits));
  }
}

TEST_CASE("arithmetic keeps the wider precision and exact comparisons") {
  ExtReal a = ExtReal::from_long(1, 80);
  ExtReal b = ExtReal::from_long(3, 300);
  CHECK((a / b).bits() == 300);
  CHECK(abs(ExtReal::from_long(-7, 64)) == ExtReal::from_long(7, 64));
  CHECK(pow_ui(ExtReal::from_long(2, 64), 10) == ExtReal::from_long(1024, 64));
}
