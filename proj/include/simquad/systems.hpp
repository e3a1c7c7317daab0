#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "simquad/precision.hpp"

namespace simquad {

struct CoeffTriple {
  ExtReal b, c, d;
};

/// Recurrence coefficients of the four-term relation
///   x P_n = P_{n+1} + b_n P_n + c_n P_{n-1} + d_n P_{n-2},
/// produced on demand: b from index 0, c from index 1, d from index 2.
class SteplineCoefficients {
public:
  using Generator = std::function<ExtReal(int, const PrecisionContext&)>;

  SteplineCoefficients(Generator b, Generator c, Generator d);

  ExtReal b(int n, const PrecisionContext& ctx) const;
  ExtReal c(int n, const PrecisionContext& ctx) const;
  ExtReal d(int n, const PrecisionContext& ctx) const;

private:
  Generator b_, c_, d_;
};

/// Nearest-neighbor recurrence coefficients on the multi-index grid (n,m).
/// Tables may be ragged; a missing entry raises IncompleteInputError naming
/// the index.
class NNCoefficients {
public:
  using Table = std::vector<std::vector<ExtReal>>;

  NNCoefficients(Table a, Table b, Table c, Table d);

  const ExtReal& a(int n, int m) const;
  const ExtReal& b(int n, int m) const;
  const ExtReal& c(int n, int m) const;
  const ExtReal& d(int n, int m) const;

private:
  const ExtReal& at(const Table& t, char name, int n, int m) const;
  Table a_, b_, c_, d_;
};

/// Converts nearest-neighbor coefficients to stepline coefficients for
/// indices up to N:
///   b_{2k} = c_{k,k}                      b_{2k+1} = d_{k+1,k}
///   c_{2k} = a_{k,k} + b_{k,k}            c_{2k+1} = a_{k+1,k} + b_{k+1,k}
///   d_{2k} = a_{k,k} (c_{k-1,k-1} - d_{k-1,k-1})
///   d_{2k+1} = b_{k+1,k} (d_{k,k-1} - c_{k,k-1})
/// All grid points touched by stepline indices <= N must be present.
SteplineCoefficients nn_to_stepline(const NNCoefficients& nn, int N);

/// Lower-triangular 2x2 matrix D turning left-eigenvector components into
/// quadrature weights; the inverse of the constant type-I matrix
/// [[A1, 0], [A2, B2]].
struct NormalizationMatrix {
  ExtReal d11, d21, d22;
};

CoeffTriple besselK_coeffs(const ExtReal& alpha, const ExtReal& nu, int n,
                           const PrecisionContext& ctx);
CoeffTriple besselI_coeffs(const ExtReal& nu, const ExtReal& c, int n,
                           const PrecisionContext& ctx);

NormalizationMatrix besselK_normalization(const ExtReal& alpha, const ExtReal& nu,
                                          const PrecisionContext& ctx);
NormalizationMatrix besselI_normalization(const ExtReal& nu, const ExtReal& c,
                                          const PrecisionContext& ctx);

/// User-supplied stepline system: coefficient tables as exact decimal
/// strings, optional normalization matrix and moment tables.
struct CustomSpec {
  std::vector<std::string> b;         // indices 0, 1, 2, ...
  std::vector<std::string> c;         // indices 1, 2, ...
  std::vector<std::string> d;         // indices 2, 3, ...
  std::optional<std::array<std::string, 3>> D;  // d11, d21, d22
  std::vector<std::string> moments1;  // degree 0, 1, ... (may be empty)
  std::vector<std::string> moments2;
};

/// A pair of measures described by stepline recurrence coefficients, a
/// normalization matrix and moment oracles. Immutable; all numeric values
/// are produced on demand at the precision of the supplied context.
class WeightSystem {
public:
  enum class Kind { BesselK, BesselI, CustomStepline };

  // weights x^alpha (rho_nu, rho_{nu+1}); requires alpha > -1, nu >= 0
  static WeightSystem besselK(const std::string& alpha, const std::string& nu);
  // weights (omega_{nu,c}, omega_{nu+1,c}); requires nu > -1, c > 0
  static WeightSystem besselI(const std::string& nu, const std::string& c);
  static WeightSystem custom(CustomSpec spec);
  static WeightSystem custom_from_json(const nlohmann::json& j);
  static WeightSystem custom_from_file(const std::string& path);

  Kind kind() const noexcept { return kind_; }

  // b_n, c_n, d_n with the below-range values (c_0, d_0, d_1) equal to 0
  CoeffTriple coeffs(int n, const PrecisionContext& ctx) const;
  SteplineCoefficients stepline() const;

  bool has_normalization() const noexcept;
  NormalizationMatrix normalization(const PrecisionContext& ctx) const;

  bool has_moments(int measure) const noexcept;
  // n-th moment of measure j in {1,2}
  ExtReal moment(int measure, int n, const PrecisionContext& ctx) const;

  // serializable description (kind + parameters, or the custom tables)
  nlohmann::json descriptor() const;

private:
  WeightSystem(Kind kind, std::string p1, std::string p2);
  explicit WeightSystem(CustomSpec spec);

  Kind kind_;
  std::string param1_, param2_;  // besselK: alpha, nu; besselI: nu, c
  std::shared_ptr<const CustomSpec> custom_;
};

/// n-th moment of measure j in {1,2} of the given system.
ExtReal moment(const WeightSystem& system, int measure, int n, const PrecisionContext& ctx);

}  // namespace simquad
