#include "simquad/hessenberg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace simquad {

namespace {

std::string describe(const ExtReal& x) { return x.sci(20); }

}  // namespace

ExtReal BandedHessenberg::entry(int row, int col) const {
  if (row < 0 || col < 0 || row >= size || col >= size)
    throw DomainError("BandedHessenberg::entry: index out of range");
  ExtReal one = ExtReal::from_long(1, diag.empty() ? 64 : diag[0].bits());
  if (col == row + 1) return one;
  if (col == row) return diag[static_cast<size_t>(row)];
  if (col == row - 1) return sub1[static_cast<size_t>(row)];
  if (col == row - 2) return sub2[static_cast<size_t>(row)];
  return ExtReal(one.bits());
}

BandedHessenberg build_hessenberg(const WeightSystem& system, int N, const PrecisionContext& ctx) {
  if (N < 1) throw DomainError("build_hessenberg: N must be >= 1");
  BandedHessenberg H;
  H.size = N;
  H.diag.reserve(static_cast<size_t>(N));
  H.sub1.reserve(static_cast<size_t>(N));
  H.sub2.reserve(static_cast<size_t>(N));
  for (int n = 0; n < N; ++n) {
    CoeffTriple t = system.coeffs(n, ctx);
    H.diag.push_back(std::move(t.b));
    H.sub1.push_back(n >= 1 ? std::move(t.c) : ctx.zero());
    H.sub2.push_back(n >= 2 ? std::move(t.d) : ctx.zero());
  }
  return H;
}

PolyValue eval_typeII(const BandedHessenberg& H, int n, const ExtReal& x) {
  if (n < 0 || n > H.size)
    throw DomainError("eval_typeII: degree out of range of the prebuilt matrix");
  const mpfr_prec_t bits = x.bits();
  ExtReal pm2(bits), pm1(bits), p = ExtReal::from_long(1, bits);
  ExtReal dm2(bits), dm1(bits), dp(bits);
  for (int k = 0; k < n; ++k) {
    ExtReal xm = x - H.diag[static_cast<size_t>(k)];
    ExtReal pn = xm * p;
    ExtReal dn = p + xm * dp;
    if (k >= 1) {
      pn -= H.sub1[static_cast<size_t>(k)] * pm1;
      dn -= H.sub1[static_cast<size_t>(k)] * dm1;
    }
    if (k >= 2) {
      pn -= H.sub2[static_cast<size_t>(k)] * pm2;
      dn -= H.sub2[static_cast<size_t>(k)] * dm2;
    }
    pm2 = std::move(pm1);
    pm1 = std::move(p);
    p = std::move(pn);
    dm2 = std::move(dm1);
    dm1 = std::move(dp);
    dp = std::move(dn);
  }
  return PolyValue{std::move(p), std::move(dp)};
}

PolyValue eval_typeII(const WeightSystem& system, int n, const ExtReal& x,
                      const PrecisionContext& ctx) {
  if (n < 0) throw DomainError("eval_typeII: degree must be >= 0");
  const mpfr_prec_t bits = ctx.working_bits();
  ExtReal xw(bits);
  mpfr_set(xw.raw(), x.raw(), MPFR_RNDN);
  ExtReal pm2(bits), pm1(bits), p = ExtReal::from_long(1, bits);
  ExtReal dm2(bits), dm1(bits), dp(bits);
  for (int k = 0; k < n; ++k) {
    CoeffTriple t = system.coeffs(k, ctx);
    ExtReal xm = xw - t.b;
    ExtReal pn = xm * p;
    ExtReal dn = p + xm * dp;
    if (k >= 1) {
      pn -= t.c * pm1;
      dn -= t.c * dm1;
    }
    if (k >= 2) {
      pn -= t.d * pm2;
      dn -= t.d * dm2;
    }
    pm2 = std::move(pm1);
    pm1 = std::move(p);
    p = std::move(pn);
    dm2 = std::move(dm1);
    dm1 = std::move(dp);
  }
  return PolyValue{std::move(p), std::move(dp)};
}

namespace {

// ---- double-precision seeding ----

// Parlett-Reinsch balancing (radix 2), then the standard real Schur solve.
std::vector<double> double_seeds(const BandedHessenberg& H) {
  const int n = H.size;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = H.diag[static_cast<size_t>(i)].to_double();
    if (i + 1 < n) A(i, i + 1) = 1.0;
    if (i >= 1) A(i, i - 1) = H.sub1[static_cast<size_t>(i)].to_double();
    if (i >= 2) A(i, i - 2) = H.sub2[static_cast<size_t>(i)].to_double();
  }
  if (!A.allFinite()) {
    // entries overflow double; hand back zero seeds, the fallback takes over
    return std::vector<double>(static_cast<size_t>(n), 0.0);
  }
  constexpr double radix2 = 4.0;  // radix^2
  bool converged = false;
  while (!converged) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i));
        r += std::abs(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / 2.0, f = 1.0, s = c + r;
      while (c < g) {
        f *= 2.0;
        c *= radix2;
      }
      g = r * 2.0;
      while (c > g) {
        f /= 2.0;
        c /= radix2;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        A.row(i) /= f;
        A.col(i) *= f;
      }
    }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(A, /*computeEigenvectors=*/false);
  std::vector<double> seeds(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) seeds[static_cast<size_t>(i)] = solver.eigenvalues()(i).real();
  std::sort(seeds.begin(), seeds.end());
  return seeds;
}

// strictly increasing copy of the seeds, collisions nudged apart
std::vector<ExtReal> spread(const std::vector<double>& seeds, mpfr_prec_t bits) {
  std::vector<ExtReal> z;
  z.reserve(seeds.size());
  for (double s : seeds) {
    ExtReal t = ExtReal::from_double(std::isfinite(s) ? s : 0.0, bits);
    if (!z.empty() && !(t > z.back())) {
      ExtReal bump = max(abs(z.back()) * ExtReal::from_string("1e-6", bits),
                         ExtReal::from_string("1e-6", bits));
      t = z.back() + bump;
    }
    z.push_back(std::move(t));
  }
  return z;
}

struct Tolerances {
  ExtReal newton_step;   // relative step size for convergence
  ExtReal accept;        // |P/P'| acceptance bound, times max(1,|x|)
  ExtReal separation;    // minimum gap between adjacent roots, times max(1,|x|)
};

Tolerances make_tolerances(const PrecisionContext& ctx) {
  return Tolerances{ctx.pow10(-(ctx.working_digits() - 5)), ctx.pow10(-ctx.digits() + 5),
                    ctx.pow10(-ctx.digits() / 2)};
}

ExtReal scale_of(const ExtReal& x) {
  ExtReal a = abs(x);
  ExtReal one = ExtReal::from_long(1, a.bits());
  return max(a, one);
}

// Newton iteration on P_N; returns false if it fails to settle.
bool polish(const BandedHessenberg& H, ExtReal& x, const Tolerances& tol) {
  const int kMaxIter = 120;
  bool settled = false;
  for (int it = 0; it < kMaxIter; ++it) {
    PolyValue pv = eval_typeII(H, H.size, x);
    if (!pv.value.is_finite() || !pv.derivative.is_finite()) return false;
    if (pv.value.is_zero()) return true;
    if (pv.derivative.is_zero()) return false;
    ExtReal step = pv.value / pv.derivative;
    x -= step;
    if (abs(step) <= tol.newton_step * scale_of(x)) {
      if (settled) return true;
      settled = true;
    } else {
      settled = false;
    }
  }
  return settled;
}

bool certified(const BandedHessenberg& H, const std::vector<ExtReal>& roots,
               const Tolerances& tol) {
  const int n = H.size;
  if (static_cast<int>(roots.size()) != n) return false;
  for (const ExtReal& x : roots) {
    if (!x.is_finite()) return false;
    PolyValue pv = eval_typeII(H, n, x);
    if (pv.derivative.is_zero()) return false;
    if (!(abs(pv.value / pv.derivative) < tol.accept * scale_of(x))) return false;
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (!(roots[static_cast<size_t>(i + 1)] - roots[static_cast<size_t>(i)] >
          tol.separation * scale_of(roots[static_cast<size_t>(i + 1)])))
      return false;
  }
  return true;
}

// Aberth-Ehrlich simultaneous iteration over the reals (all roots of the
// built-in systems are real and simple; custom systems are certified after
// the fact). Gauss-Seidel sweeps, deterministic order.
bool aberth(const BandedHessenberg& H, std::vector<ExtReal>& z, const PrecisionContext& ctx,
            const Tolerances& tol) {
  const int n = H.size;
  const int kMaxSweeps = 600;
  ExtReal tiny = ctx.pow10(-(ctx.working_digits() + 30));
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    ExtReal worst(ctx.working_bits());
    for (int i = 0; i < n; ++i) {
      PolyValue pv = eval_typeII(H, n, z[static_cast<size_t>(i)]);
      if (pv.value.is_zero()) continue;
      if (pv.derivative.is_zero()) {
        z[static_cast<size_t>(i)] += tiny + abs(z[static_cast<size_t>(i)]) * tiny;
        worst = max(worst, ExtReal::from_long(1, ctx.working_bits()));
        continue;
      }
      ExtReal w = pv.value / pv.derivative;
      ExtReal s(ctx.working_bits());
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        ExtReal dz = z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)];
        if (dz.is_zero()) dz = tiny;
        s += ExtReal::from_long(1, ctx.working_bits()) / dz;
      }
      ExtReal den = ExtReal::from_long(1, ctx.working_bits()) - w * s;
      ExtReal step = den.is_zero() ? w : w / den;
      if (!step.is_finite()) return false;
      z[static_cast<size_t>(i)] -= step;
      if (!z[static_cast<size_t>(i)].is_finite()) return false;
      worst = max(worst, abs(step) / scale_of(z[static_cast<size_t>(i)]));
    }
    if (worst < tol.newton_step) return true;
  }
  return false;
}

std::vector<ExtReal> uniform_init(const BandedHessenberg& H, const PrecisionContext& ctx) {
  const int n = H.size;
  const mpfr_prec_t bits = ctx.working_bits();
  ExtReal lo = H.diag[0], hi = H.diag[0];
  for (int i = 0; i < n; ++i) {
    ExtReal r(bits);
    if (i + 1 < n) r = r + 1L;
    if (i >= 1) r += abs(H.sub1[static_cast<size_t>(i)]);
    if (i >= 2) r += abs(H.sub2[static_cast<size_t>(i)]);
    lo = min(lo, H.diag[static_cast<size_t>(i)] - r);
    hi = max(hi, H.diag[static_cast<size_t>(i)] + r);
  }
  std::vector<ExtReal> z;
  z.reserve(static_cast<size_t>(n));
  ExtReal width = hi - lo;
  for (int i = 0; i < n; ++i) z.push_back(lo + width * (2L * i + 1) / (2L * n));
  return z;
}

std::vector<ExtReal> solve_nodes(const BandedHessenberg& H, const PrecisionContext& ctx,
                                 const std::vector<ExtReal>* hint = nullptr) {
  const int n = H.size;
  const Tolerances tol = make_tolerances(ctx);
  if (n == 1) return {H.diag[0]};

  // roots carried over from a previous solve polish in one or two steps
  if (hint && static_cast<int>(hint->size()) == n) {
    std::vector<ExtReal> roots;
    roots.reserve(hint->size());
    bool ok = true;
    for (const ExtReal& h : *hint) {
      ExtReal x(ctx.working_bits());
      mpfr_set(x.raw(), h.raw(), MPFR_RNDN);
      if (!polish(H, x, tol)) {
        ok = false;
        break;
      }
      roots.push_back(std::move(x));
    }
    if (ok) {
      std::sort(roots.begin(), roots.end());
      if (certified(H, roots, tol)) return roots;
    }
  }

  std::vector<double> seeds = double_seeds(H);

  // fast path: every double seed polishes to a distinct real root
  std::vector<ExtReal> roots = spread(seeds, ctx.working_bits());
  bool all_polished = true;
  for (ExtReal& x : roots) {
    if (!polish(H, x, tol)) {
      all_polished = false;
      break;
    }
  }
  if (all_polished) {
    std::sort(roots.begin(), roots.end());
    if (certified(H, roots, tol)) return roots;
  }

  // fallback: simultaneous iteration, first from the seed cloud, then from
  // a uniform spread over the Gershgorin interval
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<ExtReal> z =
        attempt == 0 ? spread(seeds, ctx.working_bits()) : uniform_init(H, ctx);
    if (!aberth(H, z, ctx, tol)) continue;
    for (ExtReal& x : z) polish(H, x, tol);
    std::sort(z.begin(), z.end());
    if (certified(H, z, tol)) return z;
    // distinguish the failure for the terminal diagnostic
    roots = std::move(z);
  }

  // classify the failure
  std::sort(roots.begin(), roots.end());
  for (int i = 0; i + 1 < n; ++i) {
    if (!(roots[static_cast<size_t>(i + 1)] - roots[static_cast<size_t>(i)] >
          tol.separation * scale_of(roots[static_cast<size_t>(i + 1)]))) {
      std::ostringstream os;
      os << "eigen_nodes: roots " << i + 1 << " and " << i + 2 << " coincide near "
         << describe(roots[static_cast<size_t>(i)])
         << "; increase digits or supply a perfect system";
      throw MultiplicityError(os.str());
    }
  }
  throw RealityError(
      "eigen_nodes: could not certify " + std::to_string(n) +
      " real simple eigenvalues at the working precision; increase digits");
}

}  // namespace

std::vector<ExtReal> eigen_nodes(const WeightSystem& system, int N, const PrecisionContext& ctx) {
  BandedHessenberg H = build_hessenberg(system, N, ctx);
  return solve_nodes(H, ctx);
}

std::vector<ExtReal> right_eigenvector(const WeightSystem& system, const ExtReal& node, int N,
                                       const PrecisionContext& ctx) {
  if (N < 1) throw DomainError("right_eigenvector: N must be >= 1");
  BandedHessenberg H = build_hessenberg(system, N, ctx);
  const mpfr_prec_t bits = ctx.working_bits();
  ExtReal x(bits);
  mpfr_set(x.raw(), node.raw(), MPFR_RNDN);
  std::vector<ExtReal> v;
  v.reserve(static_cast<size_t>(N));
  for (int k = 0; k < N; ++k) v.push_back(eval_typeII(H, k, x).value);
  return v;
}

std::vector<ExtReal> left_eigenvector(const BandedHessenberg& H, const ExtReal& node,
                                      const PrecisionContext& ctx) {
  const int n = H.size;
  const mpfr_prec_t bits = ctx.working_bits();
  ExtReal x(bits);
  mpfr_set(x.raw(), node.raw(), MPFR_RNDN);
  // u[i] for 1-based i in 1..n; tail conditions u_{n+1} = u_{n+2} = 0
  std::vector<ExtReal> u(static_cast<size_t>(n) + 3, ExtReal(bits));
  u[static_cast<size_t>(n)] = ExtReal::from_long(1, bits);
  for (int i = n; i >= 2; --i) {
    ExtReal t = (x - H.diag[static_cast<size_t>(i - 1)]) * u[static_cast<size_t>(i)];
    if (i <= n - 1) t -= H.sub1[static_cast<size_t>(i)] * u[static_cast<size_t>(i) + 1];
    if (i <= n - 2) t -= H.sub2[static_cast<size_t>(i) + 1] * u[static_cast<size_t>(i) + 2];
    u[static_cast<size_t>(i) - 1] = std::move(t);
  }
  return std::vector<ExtReal>(u.begin() + 1, u.begin() + 1 + n);
}

namespace {

struct PairAssembly {
  std::vector<EigenPair> pairs;
  bool ok = true;
  double deficit_digits = 0.0;  // log10 of the worst residual/bound ratio
  std::string failure;
};

// Builds every pair and checks the residual certificates against the
// reporting precision of `target`. Arithmetic runs at the precision of
// `work`, which may carry extra guard digits.
PairAssembly assemble_pairs(const BandedHessenberg& H, const std::vector<ExtReal>& nodes,
                            const PrecisionContext& work, const PrecisionContext& target) {
  const int N = H.size;
  ExtReal bound_factor = work.pow10(-target.digits() + 10);
  PairAssembly out;
  out.pairs.reserve(nodes.size());
  for (const ExtReal& x : nodes) {
    EigenPair pair;
    pair.node = x;

    // right vector and its residual rows; row N-1 contributes P_N(x)
    pair.right.reserve(static_cast<size_t>(N));
    PolyValue pN{ExtReal(work.working_bits()), ExtReal(work.working_bits())};
    {
      const mpfr_prec_t bits = work.working_bits();
      ExtReal pm2(bits), pm1(bits), p = ExtReal::from_long(1, bits);
      ExtReal dm2(bits), dm1(bits), dp(bits);
      for (int k = 0; k < N; ++k) {
        pair.right.push_back(p);
        ExtReal xm = x - H.diag[static_cast<size_t>(k)];
        ExtReal pn = xm * p;
        ExtReal dn = p + xm * dp;
        if (k >= 1) {
          pn -= H.sub1[static_cast<size_t>(k)] * pm1;
          dn -= H.sub1[static_cast<size_t>(k)] * dm1;
        }
        if (k >= 2) {
          pn -= H.sub2[static_cast<size_t>(k)] * pm2;
          dn -= H.sub2[static_cast<size_t>(k)] * dm2;
        }
        pm2 = std::move(pm1);
        pm1 = std::move(p);
        p = std::move(pn);
        dm2 = std::move(dm1);
        dm1 = std::move(dp);
        dp = std::move(dn);
      }
      pN.value = std::move(p);
      pN.derivative = std::move(dp);
    }

    ExtReal vmax(work.working_bits());
    for (const ExtReal& vi : pair.right) vmax = max(vmax, abs(vi));
    // recompute H v - x v from the stored components; rows 0..N-2 are
    // rounding noise, row N-1 evaluates to -P_N(x)
    ExtReal rmax(work.working_bits());
    for (int i = 0; i < N; ++i) {
      ExtReal r = H.diag[static_cast<size_t>(i)] * pair.right[static_cast<size_t>(i)] -
                  x * pair.right[static_cast<size_t>(i)];
      if (i + 1 < N) r += pair.right[static_cast<size_t>(i) + 1];
      if (i >= 1) r += H.sub1[static_cast<size_t>(i)] * pair.right[static_cast<size_t>(i) - 1];
      if (i >= 2) r += H.sub2[static_cast<size_t>(i)] * pair.right[static_cast<size_t>(i) - 2];
      rmax = max(rmax, abs(r));
    }
    pair.right_residual = rmax;

    pair.left = left_eigenvector(H, x, work);
    ExtReal umax(work.working_bits());
    for (const ExtReal& ui : pair.left) umax = max(umax, abs(ui));
    ExtReal lres = (H.diag[0] - x) * pair.left[0];
    if (N >= 2) lres += H.sub1[1] * pair.left[1];
    if (N >= 3) lres += H.sub2[2] * pair.left[2];
    pair.left_residual = abs(lres);

    pair.newton_residual =
        pN.derivative.is_zero() ? abs(pN.value) : abs(pN.value / pN.derivative);

    ExtReal scale = scale_of(x);
    auto record_violation = [&](const char* which, const ExtReal& residual, const ExtReal& norm) {
      ExtReal bound = bound_factor * scale * norm;
      out.ok = false;
      double r = bound.is_zero() ? 0.0 : (residual / bound).to_double();
      double ratio = std::isfinite(r) && r > 0.0 ? std::log10(r) : 300.0;
      out.deficit_digits = std::max(out.deficit_digits, ratio);
      out.failure = std::string("eigen_pairs: ") + which + " residual " + describe(residual) +
                    " exceeds its bound " + describe(bound) + " at node " + describe(x);
    };
    if (!(pair.right_residual <= bound_factor * scale * vmax))
      record_violation("right", pair.right_residual, vmax);
    if (!(pair.left_residual <= bound_factor * scale * umax))
      record_violation("left", pair.left_residual, umax);
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

}  // namespace

std::vector<EigenPair> eigen_pairs(const WeightSystem& system, int N, const PrecisionContext& ctx) {
  // The first-row value recorded as the left residual equals P_N evaluated
  // at the stored node, whose floor is |P_N'| times the node's own ulp.
  // When the left eigenvector's norm is small relative to |P_N'| (the edge
  // nodes at larger N), the requested guard cannot reach the certificate
  // bound, so the solve escalates its internal precision until it does;
  // results are still reported at the requested digits.
  int extra = 0;
  std::vector<ExtReal> hint;
  std::string last_failure;
  for (int attempt = 0; attempt < 5; ++attempt) {
    PrecisionContext work(ctx.digits(), ctx.guard() + extra);
    BandedHessenberg H = build_hessenberg(system, N, work);
    std::vector<ExtReal> nodes = solve_nodes(H, work, hint.empty() ? nullptr : &hint);
    PairAssembly assembly = assemble_pairs(H, nodes, work, ctx);
    if (assembly.ok) return std::move(assembly.pairs);
    last_failure = assembly.failure;
    int deficit = static_cast<int>(std::ceil(std::max(assembly.deficit_digits, 1.0)));
    extra += deficit + 15;
    if (extra > 20000) break;
    hint = std::move(nodes);
  }
  throw ResidualError(last_failure + "; certificate unreachable, increase digits");
}

}  // namespace simquad
