#pragma once

#include <vector>

#include "simquad/precision.hpp"
#include "simquad/systems.hpp"

namespace simquad {

/// N x N banded Hessenberg matrix: unit superdiagonal, main diagonal b,
/// first subdiagonal c, second subdiagonal d. Diagonals are stored aligned
/// with the recurrence index: diag[i] = b_i, sub1[i] = c_i (valid for
/// i >= 1), sub2[i] = d_i (valid for i >= 2); the unused low entries are 0.
struct BandedHessenberg {
  int size = 0;
  std::vector<ExtReal> diag;
  std::vector<ExtReal> sub1;
  std::vector<ExtReal> sub2;

  // dense entry, superdiagonal and zero fill included (row, col are 0-based)
  ExtReal entry(int row, int col) const;
};

/// One certified eigenvalue with its eigenvectors. `right` holds
/// (P_0(x), ..., P_{N-1}(x)) so right[0] = 1; `left` is the backward
/// recurrence solution normalized so left[N-1] = 1.
struct EigenPair {
  ExtReal node;
  std::vector<ExtReal> right;
  std::vector<ExtReal> left;
  ExtReal right_residual;   // max-norm of H v - x v
  ExtReal left_residual;    // |(b_0 - x) u_1 + c_1 u_2 + d_2 u_3|
  ExtReal newton_residual;  // |P_N(x) / P_N'(x)| at acceptance
};

struct PolyValue {
  ExtReal value;
  ExtReal derivative;
};

BandedHessenberg build_hessenberg(const WeightSystem& system, int N, const PrecisionContext& ctx);

/// Monic type II polynomial and derivative by the forward recurrence
///   P_{n+1} = (x - b_n) P_n - c_n P_{n-1} - d_n P_{n-2},  P_0 = 1.
PolyValue eval_typeII(const WeightSystem& system, int n, const ExtReal& x,
                      const PrecisionContext& ctx);

/// Same recurrence driven by prebuilt diagonals; n may not exceed H.size.
PolyValue eval_typeII(const BandedHessenberg& H, int n, const ExtReal& x);

/// All N eigenvalues of H_N (zeros of P_N) in strictly ascending order,
/// each certified by |P_N(x)/P_N'(x)| < 10^(5-digits) max(1,|x|) and by
/// pairwise separation. Seeds come from a balanced double-precision solve
/// polished by Newton iteration; Aberth-Ehrlich simultaneous iteration at
/// working precision is the fallback when seeding fails.
std::vector<ExtReal> eigen_nodes(const WeightSystem& system, int N, const PrecisionContext& ctx);

/// Right eigenvector (P_0(x), ..., P_{N-1}(x)) for a certified node.
std::vector<ExtReal> right_eigenvector(const WeightSystem& system, const ExtReal& node, int N,
                                       const PrecisionContext& ctx);

/// Left eigenvector by the backward recurrence
///   u_{i-1} = (x - b_{i-1}) u_i - c_i u_{i+1} - d_{i+1} u_{i+2},
/// i = N..2, with u_{N+2} = u_{N+1} = 0 and u_N = 1.
std::vector<ExtReal> left_eigenvector(const BandedHessenberg& H, const ExtReal& node,
                                      const PrecisionContext& ctx);

/// Nodes with both eigenvectors and certified residuals, ascending by node.
/// Throws ResidualError if any residual exceeds its bound.
std::vector<EigenPair> eigen_pairs(const WeightSystem& system, int N, const PrecisionContext& ctx);

}  // namespace simquad
