#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "simquad/hessenberg.hpp"
#include "simquad/precision.hpp"
#include "simquad/systems.hpp"

namespace simquad {

/// One simultaneous rule: N common nodes in strictly ascending order with
/// one weight vector per measure, plus the residual certificates of the
/// eigenpairs it was built from.
struct QuadratureRule {
  int n_nodes = 0;
  int digits = 0;
  std::string system_descriptor;  // compact JSON text of the generating system
  std::vector<ExtReal> nodes;
  std::vector<ExtReal> weights1;
  std::vector<ExtReal> weights2;
  std::vector<ExtReal> right_residuals;
  std::vector<ExtReal> left_residuals;
  std::vector<ExtReal> newton_residuals;
};

/// Per-measure exactness verification against the moment oracle.
struct ExactnessReport {
  int n_nodes = 0;
  int digits = 0;
  // claimed exact degrees: N = 2n gives (3n-1, 3n-1); N = 2n+1 gives (3n+1, 3n)
  int claimed_degree1 = 0;
  int claimed_degree2 = 0;
  std::vector<ExtReal> errors1;  // relative error per degree 0..claimed_degree1
  std::vector<ExtReal> errors2;
  bool pass1 = false;
  bool pass2 = false;
  bool pass() const { return pass1 && pass2; }
};

using Integrand = std::function<ExtReal(const ExtReal&, const PrecisionContext&)>;

/// Builds the rule from the eigenpairs of H_N and the normalization matrix:
///   w1_j = D11 u_j(1) / <u_j, v_j>
///   w2_j = (D21 u_j(1) + D22 u_j(2)) / <u_j, v_j>
/// with u_j(2) taken as 0 when N = 1.
QuadratureRule make_rule(const WeightSystem& system, int N, const PrecisionContext& ctx);

/// Rule assembly from precomputed certified pairs (same result as make_rule).
QuadratureRule make_rule(const WeightSystem& system, const std::vector<EigenPair>& pairs,
                         const PrecisionContext& ctx);

/// (sum w1_k f(x_k), sum w2_k f(x_k)), accumulated in ascending node order.
std::pair<ExtReal, ExtReal> integrate(const QuadratureRule& rule, const Integrand& f);

/// Independent weights through interpolatory exactness: solves the primal
/// Vandermonde system  sum_k w_k x_k^m = moment(mu_j, m), m = 0..N-1, by
/// Bjorck-Pereyra elimination at working precision. Never touches the
/// eigenvector path.
std::pair<std::vector<ExtReal>, std::vector<ExtReal>> weights_oracle(
    const std::vector<ExtReal>& nodes, const WeightSystem& system, const PrecisionContext& ctx);

/// Compares quadrature sums of x^m against the moment oracle for every
/// degree up to the claimed bound; the pass threshold for degree m is
/// 10^(25+m-digits) relative (degree-graded to absorb conditioning).
ExactnessReport verify_exactness(const QuadratureRule& rule, const WeightSystem& system,
                                 const PrecisionContext& ctx);

/// Deterministic JSON with every numeric as a decimal string rounded to the
/// rule's digits. Parsing and re-serializing is byte-identical.
std::string rule_to_json(const QuadratureRule& rule);
QuadratureRule rule_from_json(const std::string& text);

}  // namespace simquad
