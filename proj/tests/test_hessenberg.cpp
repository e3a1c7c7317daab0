#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "simquad/hessenberg.hpp"

using namespace simquad;
using simquad::testing::bisection_roots;
using simquad::testing::close;
using simquad::testing::dense_left_null;
using simquad::testing::matches_printed;

TEST_CASE("matrix construction and structure") {
  PrecisionContext ctx(30);
  WeightSystem k10 = WeightSystem::besselK("1", "0");
  BandedHessenberg one = build_hessenberg(k10, 1, ctx);
  CHECK(one.size == 1);
  CHECK(one.diag[0] == ctx.real(4));

  WeightSystem i01 = WeightSystem::besselI("0", "1");
  BandedHessenberg H = build_hessenberg(i01, 3, ctx);
  CHECK(H.diag[0] == ctx.real(2));
  CHECK(H.diag[1] == ctx.real(4));
  CHECK(H.diag[2] == ctx.real(6));
  CHECK(H.sub1[1] == ctx.real(3));
  CHECK(H.sub1[2] == ctx.real(8));
  CHECK(H.sub2[2] == ctx.real(2));
  // unit superdiagonal, zeros beyond the band
  CHECK(H.entry(0, 1) == ctx.real(1));
  CHECK(H.entry(1, 2) == ctx.real(1));
  CHECK(H.entry(0, 2) == ctx.real(0));
  CHECK_THROWS_AS(build_hessenberg(i01, 0, ctx), DomainError);
}

TEST_CASE("construction fails when a custom table runs out") {
  PrecisionContext ctx(20);
  CustomSpec spec;
  spec.b = {"1", "2"};
  spec.c = {"1"};
  spec.d = {};
  WeightSystem sys = WeightSystem::custom(spec);
  CHECK(build_hessenberg(sys, 2, ctx).size == 2);
  CHECK_THROWS_AS(build_hessenberg(sys, 3, ctx), IncompleteInputError);
}

TEST_CASE("forward recurrence values and derivatives") {
  PrecisionContext ctx(35);
  WeightSystem sys = WeightSystem::besselK("1", "0");
  for (long t : {-3, 0, 7, 100}) {
    ExtReal x = ctx.real(t);
    auto p0 = eval_typeII(sys, 0, x, ctx);
    CHECK(p0.value == ctx.real(1));
    CHECK(p0.derivative == ctx.real(0));
    auto p1 = eval_typeII(sys, 1, x, ctx);
    CHECK(p1.value == x - 4L);
    CHECK(p1.derivative == ctx.real(1));
  }
  // P_2(0) = b_0 b_1 - c_1 = 4*14 - 20
  auto p2 = eval_typeII(sys, 2, ctx.zero(), ctx);
  CHECK(p2.value == ctx.real(36));
  // the prebuilt-diagonal evaluator agrees with the lazy one
  BandedHessenberg H = build_hessenberg(sys, 6, ctx);
  ExtReal x = ctx.real("3.25");
  auto a = eval_typeII(sys, 6, x, ctx);
  auto b = eval_typeII(H, 6, x);
  CHECK(a.value == b.value);
  CHECK(a.derivative == b.derivative);
}

TEST_CASE("single node equals the first recurrence coefficient") {
  PrecisionContext ctx(30);
  auto nodes = eigen_nodes(WeightSystem::besselK("1", "0"), 1, ctx);
  REQUIRE(nodes.size() == 1);
  CHECK(nodes[0] == ctx.real(4));
}

TEST_CASE("ten-node endpoints reproduce the published tables") {
  PrecisionContext ctx(100);
  auto kn = eigen_nodes(WeightSystem::besselK("1", "0"), 10, ctx);
  REQUIRE(kn.size() == 10);
  CHECK(kn.front().fixed(20) == "0.52720348133440875760");
  CHECK(kn.back().fixed(20) == "485.08440564025807348828");
  auto in = eigen_nodes(WeightSystem::besselI("0", "1"), 10, ctx);
  CHECK(matches_printed(in.front(), "0.1531952228", 10));
  CHECK(matches_printed(in.back(), "32.7593296369", 10));
}

TEST_CASE("nodes agree with the bisection oracle up to N = 8") {
  PrecisionContext ctx(60);
  for (auto sys : {WeightSystem::besselK("1", "0"), WeightSystem::besselI("0", "1"),
                   WeightSystem::besselK("0.5", "1.25")}) {
    for (int N : {2, 5, 8}) {
      auto fast = eigen_nodes(sys, N, ctx);
      auto slow = bisection_roots(sys, N, ctx);
      REQUIRE(fast.size() == slow.size());
      for (size_t i = 0; i < fast.size(); ++i)
        CHECK(close(fast[i], slow[i], -ctx.digits() + 15, ctx));
    }
  }
}

TEST_CASE("node sum equals the trace") {
  PrecisionContext ctx(60);
  for (auto sys : {WeightSystem::besselK("1", "0"), WeightSystem::besselI("0", "1")}) {
    const int N = 25;
    auto nodes = eigen_nodes(sys, N, ctx);
    ExtReal sum(ctx.working_bits()), trace(ctx.working_bits());
    for (const ExtReal& x : nodes) sum += x;
    for (int n = 0; n < N; ++n) trace += sys.coeffs(n, ctx).b;
    CHECK(simquad::testing::rel_err(sum, trace) <= ctx.pow10(-ctx.digits() + 15));
  }
}

TEST_CASE("eigenvector construction and normalization") {
  PrecisionContext ctx(50);
  WeightSystem sys = WeightSystem::besselI("0", "1");
  const int N = 6;
  BandedHessenberg H = build_hessenberg(sys, N, ctx);
  auto nodes = eigen_nodes(sys, N, ctx);

  auto v = right_eigenvector(sys, nodes[2], N, ctx);
  REQUIRE(static_cast<int>(v.size()) == N);
  CHECK(v[0] == ctx.real(1));
  CHECK(v[1] == nodes[2] - H.diag[0]);

  auto u = left_eigenvector(H, nodes[2], ctx);
  REQUIRE(static_cast<int>(u.size()) == N);
  CHECK(u[static_cast<size_t>(N) - 1] == ctx.real(1));

  BandedHessenberg H2 = build_hessenberg(sys, 2, ctx);
  auto nodes2 = eigen_nodes(sys, 2, ctx);
  auto u2 = left_eigenvector(H2, nodes2[0], ctx);
  CHECK(u2[1] == ctx.real(1));
  CHECK(u2[0] == nodes2[0] - H2.diag[1]);

  BandedHessenberg H1 = build_hessenberg(sys, 1, ctx);
  auto u1 = left_eigenvector(H1, ctx.real(2), ctx);
  REQUIRE(u1.size() == 1);
  CHECK(u1[0] == ctx.real(1));
}

TEST_CASE("left vectors match dense elimination null vectors up to N = 8") {
  PrecisionContext ctx(50);
  for (auto sys : {WeightSystem::besselK("1", "0"), WeightSystem::besselI("0", "1")}) {
    for (int N : {3, 6, 8}) {
      BandedHessenberg H = build_hessenberg(sys, N, ctx);
      auto nodes = eigen_nodes(sys, N, ctx);
      for (const ExtReal& x : {nodes.front(), nodes[nodes.size() / 2], nodes.back()}) {
        auto u = left_eigenvector(H, x, ctx);
        auto w = dense_left_null(H, x, ctx);
        ExtReal umax(ctx.working_bits());
        for (const ExtReal& t : u) umax = max(umax, abs(t));
        for (size_t i = 0; i < u.size(); ++i)
          CHECK(abs(u[i] - w[i]) <= ctx.pow10(-ctx.digits() + 20) * umax);
      }
    }
  }
}

TEST_CASE("biorthogonality of left and right eigenvectors") {
  PrecisionContext ctx(100);
  WeightSystem sys = WeightSystem::besselK("1", "0");
  const int N = 10;
  auto pairs = eigen_pairs(sys, N, ctx);
  for (size_t j = 0; j < pairs.size(); ++j) {
    for (size_t k = 0; k < pairs.size(); ++k) {
      if (j == k) continue;
      ExtReal dot(ctx.working_bits()), nu(ctx.working_bits()), nv(ctx.working_bits());
      for (int i = 0; i < N; ++i) {
        dot += pairs[j].left[static_cast<size_t>(i)] * pairs[k].right[static_cast<size_t>(i)];
        nu += pairs[j].left[static_cast<size_t>(i)] * pairs[j].left[static_cast<size_t>(i)];
        nv += pairs[k].right[static_cast<size_t>(i)] * pairs[k].right[static_cast<size_t>(i)];
      }
      ExtReal normalized = abs(dot) / (sqrt(nu) * sqrt(nv));
      CHECK(normalized <= ctx.pow10(-80));
      CHECK(normalized <= ctx.pow10(-ctx.digits() + 20));
    }
  }
}

TEST_CASE("eigen pairs carry certified residuals") {
  PrecisionContext ctx(50);
  for (auto sys : {WeightSystem::besselK("1", "0"), WeightSystem::besselI("0", "1")}) {
    const int N = 20;
    auto pairs = eigen_pairs(sys, N, ctx);
    REQUIRE(static_cast<int>(pairs.size()) == N);
    ExtReal bound = ctx.pow10(-ctx.digits() + 10);
    ExtReal accept = ctx.pow10(-ctx.digits() + 5);
    ExtReal one = ctx.real(1);
    for (size_t i = 0; i < pairs.size(); ++i) {
      const EigenPair& p = pairs[i];
      if (i + 1 < pairs.size()) CHECK(p.node < pairs[i + 1].node);
      CHECK(p.right[0] == ExtReal::from_long(1, p.right[0].bits()));
      CHECK(p.left.back() == ExtReal::from_long(1, p.left.back().bits()));
      ExtReal umax(ctx.working_bits()), vmax(ctx.working_bits());
      for (const ExtReal& t : p.left) umax = max(umax, abs(t));
      for (const ExtReal& t : p.right) vmax = max(vmax, abs(t));
      ExtReal scale = max(one, abs(p.node));
      CHECK(p.right_residual <= bound * scale * vmax);
      CHECK(p.left_residual <= bound * scale * umax);
      CHECK(p.newton_residual < accept * scale);
      ExtReal dot(ctx.working_bits());
      for (int t = 0; t < N; ++t)
        dot += p.left[static_cast<size_t>(t)] * p.right[static_cast<size_t>(t)];
      CHECK(!dot.is_zero());
    }
  }
}

TEST_CASE("recomputing with more digits moves nodes only below the reported place") {
  WeightSystem sys = WeightSystem::besselK("1", "0");
  const int N = 12;
  PrecisionContext lo(40), hi(60);
  auto a = eigen_nodes(sys, N, lo);
  auto b = eigen_nodes(sys, N, hi);
  for (size_t i = 0; i < a.size(); ++i) CHECK(close(a[i], b[i], -40, hi));
}

TEST_CASE("degenerate and complex spectra are reported, not returned") {
  PrecisionContext ctx(30);
  SUBCASE("double eigenvalue") {
    CustomSpec spec;  // [[0,1],[0,0]] has a double zero eigenvalue
    spec.b = {"0", "0"};
    spec.c = {"0"};
    WeightSystem sys = WeightSystem::custom(spec);
    CHECK_THROWS_AS(eigen_nodes(sys, 2, ctx), Error);
  }
  SUBCASE("complex pair") {
    CustomSpec spec;  // [[0,1],[-1,0]] has eigenvalues +-i
    spec.b = {"0", "0"};
    spec.c = {"-1"};
    WeightSystem sys = WeightSystem::custom(spec);
    CHECK_THROWS_WITH_AS(eigen_nodes(sys, 2, ctx), doctest::Contains("digits"), RealityError);
  }
}
