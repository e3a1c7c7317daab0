#include "simquad/quadrature.hpp"

#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace simquad {

namespace {

ExtReal inner_product(const std::vector<ExtReal>& u, const std::vector<ExtReal>& v,
                      mpfr_prec_t bits) {
  ExtReal s(bits);
  for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

}  // namespace

QuadratureRule make_rule(const WeightSystem& system, int N, const PrecisionContext& ctx) {
  return make_rule(system, eigen_pairs(system, N, ctx), ctx);
}

QuadratureRule make_rule(const WeightSystem& system, const std::vector<EigenPair>& pairs,
                         const PrecisionContext& ctx) {
  const int N = static_cast<int>(pairs.size());
  if (N < 1) throw DomainError("make_rule: N must be >= 1");
  NormalizationMatrix D = system.normalization(ctx);
  const mpfr_prec_t bits = ctx.working_bits();

  QuadratureRule rule;
  rule.n_nodes = N;
  rule.digits = ctx.digits();
  rule.system_descriptor = system.descriptor().dump();
  rule.nodes.reserve(pairs.size());
  rule.weights1.reserve(pairs.size());
  rule.weights2.reserve(pairs.size());

  ExtReal collapse = ctx.pow10(-(ctx.working_digits() - 10));
  for (const EigenPair& pair : pairs) {
    ExtReal uv = inner_product(pair.left, pair.right, bits);
    ExtReal peak(bits);
    for (size_t i = 0; i < pair.left.size(); ++i)
      peak = max(peak, abs(pair.left[i] * pair.right[i]));
    if (uv.is_zero() || abs(uv) <= collapse * peak)
      throw InnerProductCollapseError(
          "make_rule: <u,v> vanished to working precision at node " + pair.node.sci(20) +
          "; increase digits");
    ExtReal u2 = N >= 2 ? pair.left[1] : ExtReal(bits);
    rule.nodes.push_back(pair.node);
    rule.weights1.push_back(D.d11 * pair.left[0] / uv);
    rule.weights2.push_back((D.d21 * pair.left[0] + D.d22 * u2) / uv);
    rule.right_residuals.push_back(pair.right_residual);
    rule.left_residuals.push_back(pair.left_residual);
    rule.newton_residuals.push_back(pair.newton_residual);
  }
  return rule;
}

std::pair<ExtReal, ExtReal> integrate(const QuadratureRule& rule, const Integrand& f) {
  PrecisionContext ctx(rule.digits);
  ExtReal s1(ctx.working_bits()), s2(ctx.working_bits());
  for (size_t k = 0; k < rule.nodes.size(); ++k) {
    ExtReal fx(ctx.working_bits());
    try {
      fx = f(rule.nodes[k], ctx);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw IntegrandError("integrate: integrand failed at node " + std::to_string(k + 1) +
                           " (x = " + rule.nodes[k].sci(20) + "): " + e.what());
    }
    if (!fx.is_finite())
      throw IntegrandError("integrate: integrand not finite at node " + std::to_string(k + 1) +
                           " (x = " + rule.nodes[k].sci(20) + ")");
    s1 += rule.weights1[k] * fx;
    s2 += rule.weights2[k] * fx;
  }
  return {std::move(s1), std::move(s2)};
}

namespace {

// Bjorck-Pereyra elimination for the primal Vandermonde system V w = f,
// V[m][k] = x_k^m. O(N^2), exploits the Newton-basis structure.
std::vector<ExtReal> vandermonde_solve(const std::vector<ExtReal>& x, std::vector<ExtReal> f) {
  const int n = static_cast<int>(x.size());
  for (int k = 0; k < n - 1; ++k)
    for (int i = n - 1; i > k; --i)
      f[static_cast<size_t>(i)] -= x[static_cast<size_t>(k)] * f[static_cast<size_t>(i) - 1];
  for (int k = n - 2; k >= 0; --k) {
    for (int i = k + 1; i < n; ++i)
      f[static_cast<size_t>(i)] /= x[static_cast<size_t>(i)] - x[static_cast<size_t>(i - k - 1)];
    for (int i = k; i < n - 1; ++i) f[static_cast<size_t>(i)] -= f[static_cast<size_t>(i) + 1];
  }
  return f;
}

}  // namespace

std::pair<std::vector<ExtReal>, std::vector<ExtReal>> weights_oracle(
    const std::vector<ExtReal>& nodes, const WeightSystem& system, const PrecisionContext& ctx) {
  const int N = static_cast<int>(nodes.size());
  if (N < 1) throw DomainError("weights_oracle: need at least one node");
  for (int i = 0; i + 1 < N; ++i)
    if (!(nodes[static_cast<size_t>(i)] < nodes[static_cast<size_t>(i + 1)]))
      throw SingularityError("weights_oracle: nodes " + std::to_string(i + 1) + " and " +
                             std::to_string(i + 2) + " coincide or are out of order");
  const mpfr_prec_t bits = ctx.working_bits();
  std::vector<ExtReal> x;
  x.reserve(nodes.size());
  for (const ExtReal& t : nodes) {
    ExtReal w(bits);
    mpfr_set(w.raw(), t.raw(), MPFR_RNDN);
    x.push_back(std::move(w));
  }
  std::pair<std::vector<ExtReal>, std::vector<ExtReal>> out;
  for (int j = 1; j <= 2; ++j) {
    std::vector<ExtReal> f;
    f.reserve(x.size());
    for (int m = 0; m < N; ++m) f.push_back(system.moment(j, m, ctx));
    (j == 1 ? out.first : out.second) = vandermonde_solve(x, std::move(f));
  }
  return out;
}

ExactnessReport verify_exactness(const QuadratureRule& rule, const WeightSystem& system,
                                 const PrecisionContext& ctx) {
  const int N = rule.n_nodes;
  ExactnessReport report;
  report.n_nodes = N;
  report.digits = ctx.digits();
  const int half = N / 2;
  if (N % 2 == 0) {
    report.claimed_degree1 = 3 * half - 1;
    report.claimed_degree2 = 3 * half - 1;
  } else {
    report.claimed_degree1 = 3 * half + 1;
    report.claimed_degree2 = 3 * half;
  }
  const mpfr_prec_t bits = ctx.working_bits();
  for (int j = 1; j <= 2; ++j) {
    const std::vector<ExtReal>& w = j == 1 ? rule.weights1 : rule.weights2;
    int claimed = j == 1 ? report.claimed_degree1 : report.claimed_degree2;
    std::vector<ExtReal>& errors = j == 1 ? report.errors1 : report.errors2;
    bool pass = true;
    for (int m = 0; m <= claimed; ++m) {
      ExtReal sum(bits);
      for (size_t k = 0; k < rule.nodes.size(); ++k)
        sum += w[k] * pow_ui(rule.nodes[k], static_cast<unsigned long>(m));
      ExtReal mom = system.moment(j, m, ctx);
      ExtReal err = mom.is_zero() ? abs(sum) : abs(sum - mom) / abs(mom);
      if (!(err <= ctx.pow10(25 + m - ctx.digits()))) pass = false;
      errors.push_back(std::move(err));
    }
    (j == 1 ? report.pass1 : report.pass2) = pass;
  }
  return report;
}

namespace {

nlohmann::json strings_of(const std::vector<ExtReal>& xs, int digits) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ExtReal& x : xs) arr.push_back(x.sci(digits));
  return arr;
}

std::vector<ExtReal> reals_of(const nlohmann::json& arr, const PrecisionContext& ctx) {
  std::vector<ExtReal> out;
  out.reserve(arr.size());
  for (const auto& e : arr) out.push_back(ctx.real(e.get<std::string>()));
  return out;
}

}  // namespace

std::string rule_to_json(const QuadratureRule& rule) {
  nlohmann::json j;
  j["N"] = rule.n_nodes;
  j["digits"] = rule.digits;
  j["system"] = nlohmann::json::parse(rule.system_descriptor);
  j["nodes"] = strings_of(rule.nodes, rule.digits);
  j["weights1"] = strings_of(rule.weights1, rule.digits);
  j["weights2"] = strings_of(rule.weights2, rule.digits);
  j["residuals"]["right"] = strings_of(rule.right_residuals, rule.digits);
  j["residuals"]["left"] = strings_of(rule.left_residuals, rule.digits);
  j["residuals"]["newton"] = strings_of(rule.newton_residuals, rule.digits);
  return j.dump();
}

QuadratureRule rule_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  QuadratureRule rule;
  rule.n_nodes = j.at("N").get<int>();
  rule.digits = j.at("digits").get<int>();
  rule.system_descriptor = j.at("system").dump();
  PrecisionContext ctx(rule.digits);
  rule.nodes = reals_of(j.at("nodes"), ctx);
  rule.weights1 = reals_of(j.at("weights1"), ctx);
  rule.weights2 = reals_of(j.at("weights2"), ctx);
  const auto& res = j.at("residuals");
  rule.right_residuals = reals_of(res.at("right"), ctx);
  rule.left_residuals = reals_of(res.at("left"), ctx);
  rule.newton_residuals = reals_of(res.at("newton"), ctx);
  return rule;
}

}  // namespace simquad
