#include "simquad/systems.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace simquad {

namespace {

// parameter validation happens once, at a precision independent of any ctx
const mpfr_prec_t kCheckBits = 512;

ExtReal parse_param(const std::string& s, const char* name) {
  try {
    return ExtReal::from_string(s, kCheckBits);
  } catch (const DomainError&) {
    throw DomainError(std::string("parameter ") + name + " is not a decimal number: \"" + s + "\"");
  }
}

void check_index(int n, int lowest, const char* what) {
  if (n < lowest)
    throw DomainError(std::string(what) + ": index " + std::to_string(n) + " below first index " +
                      std::to_string(lowest));
}

}  // namespace

SteplineCoefficients::SteplineCoefficients(Generator b, Generator c, Generator d)
    : b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

ExtReal SteplineCoefficients::b(int n, const PrecisionContext& ctx) const {
  check_index(n, 0, "stepline b");
  return b_(n, ctx);
}

ExtReal SteplineCoefficients::c(int n, const PrecisionContext& ctx) const {
  check_index(n, 1, "stepline c");
  return c_(n, ctx);
}

ExtReal SteplineCoefficients::d(int n, const PrecisionContext& ctx) const {
  check_index(n, 2, "stepline d");
  return d_(n, ctx);
}

NNCoefficients::NNCoefficients(Table a, Table b, Table c, Table d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

const ExtReal& NNCoefficients::at(const Table& t, char name, int n, int m) const {
  if (n < 0 || m < 0 || static_cast<size_t>(n) >= t.size() ||
      static_cast<size_t>(m) >= t[static_cast<size_t>(n)].size()) {
    std::ostringstream os;
    os << "nearest-neighbor grid: missing entry " << name << "[" << n << "][" << m << "]";
    throw IncompleteInputError(os.str());
  }
  return t[static_cast<size_t>(n)][static_cast<size_t>(m)];
}

const ExtReal& NNCoefficients::a(int n, int m) const { return at(a_, 'a', n, m); }
const ExtReal& NNCoefficients::b(int n, int m) const { return at(b_, 'b', n, m); }
const ExtReal& NNCoefficients::c(int n, int m) const { return at(c_, 'c', n, m); }
const ExtReal& NNCoefficients::d(int n, int m) const { return at(d_, 'd', n, m); }

SteplineCoefficients nn_to_stepline(const NNCoefficients& nn, int N) {
  if (N < 0) throw DomainError("nn_to_stepline: N must be non-negative");
  // Materialize eagerly so missing grid points surface here, not later.
  auto bs = std::make_shared<std::vector<ExtReal>>();
  auto cs = std::make_shared<std::vector<ExtReal>>();
  auto ds = std::make_shared<std::vector<ExtReal>>();
  for (int j = 0; j <= N; ++j) {
    int k = j / 2;
    if (j % 2 == 0) {
      bs->push_back(nn.c(k, k));
    } else {
      bs->push_back(nn.d(k + 1, k));
    }
  }
  cs->push_back(ExtReal());  // placeholder for index 0
  for (int j = 1; j <= N; ++j) {
    int k = j / 2;
    if (j % 2 == 0) {
      cs->push_back(nn.a(k, k) + nn.b(k, k));
    } else {
      cs->push_back(nn.a(k + 1, k) + nn.b(k + 1, k));
    }
  }
  ds->push_back(ExtReal());
  ds->push_back(ExtReal());
  for (int j = 2; j <= N; ++j) {
    int k = j / 2;
    if (j % 2 == 0) {
      ds->push_back(nn.a(k, k) * (nn.c(k - 1, k - 1) - nn.d(k - 1, k - 1)));
    } else {
      ds->push_back(nn.b(k + 1, k) * (nn.d(k, k - 1) - nn.c(k, k - 1)));
    }
  }
  auto fetch = [N](std::shared_ptr<std::vector<ExtReal>> t, const char* name) {
    return [t, N, name](int n, const PrecisionContext&) -> ExtReal {
      if (static_cast<size_t>(n) >= t->size())
        throw IncompleteInputError(std::string("converted stepline ") + name + ": index " +
                                   std::to_string(n) + " beyond requested bound " +
                                   std::to_string(N));
      return (*t)[static_cast<size_t>(n)];
    };
  };
  return SteplineCoefficients(fetch(bs, "b"), fetch(cs, "c"), fetch(ds, "d"));
}

CoeffTriple besselK_coeffs(const ExtReal& alpha, const ExtReal& nu, int n,
                           const PrecisionContext& ctx) {
  if (!(alpha > ctx.real(-1))) throw DomainError("besselK: alpha must be > -1");
  if (nu.sign() < 0) throw DomainError("besselK: nu must be >= 0");
  if (n < 0) throw DomainError("besselK: coefficient index must be >= 0");
  const mpfr_prec_t bits = ctx.working_bits();
  ExtReal a(bits), v(bits);
  mpfr_set(a.raw(), alpha.raw(), MPFR_RNDN);
  mpfr_set(v.raw(), nu.raw(), MPFR_RNDN);
  ExtReal b = (a + (n + 1)) * (a + 2 * v + 3L * n) - (a + 1) * (v - 1);
  ExtReal c = ((a + n) * n) * ((a + v + n) * (2 * a + v + 3L * n));
  ExtReal d = (static_cast<long>(n) * (n - 1)) * (a + n) * (a + (n - 1)) * (a + v + n) *
              (a + v + (n - 1));
  return CoeffTriple{std::move(b), std::move(c), std::move(d)};
}

CoeffTriple besselI_coeffs(const ExtReal& nu, const ExtReal& c, int n,
                           const PrecisionContext& ctx) {
  if (!(nu > ctx.real(-1))) throw DomainError("besselI: nu must be > -1");
  if (c.sign() <= 0) throw DomainError("besselI: c must be > 0");
  if (n < 0) throw DomainError("besselI: coefficient index must be >= 0");
  const mpfr_prec_t bits = ctx.working_bits();
  ExtReal v(bits), cc(bits);
  mpfr_set(v.raw(), nu.raw(), MPFR_RNDN);
  mpfr_set(cc.raw(), c.raw(), MPFR_RNDN);
  ExtReal c2 = cc * cc;
  ExtReal b = ((cc * (v + (2L * n + 1))) + 1) / c2;
  ExtReal cn = (static_cast<long>(n) * (cc * (v + n) + 2)) / (c2 * cc);
  ExtReal d = ctx.real(static_cast<long>(n) * (n - 1)) / (c2 * c2);
  return CoeffTriple{std::move(b), std::move(cn), std::move(d)};
}

namespace {

// D = inverse of the lower-triangular [[a11, 0], [a21, a22]]
NormalizationMatrix invert_lower(const ExtReal& a11, const ExtReal& a21, const ExtReal& a22) {
  if (a11.is_zero() || a22.is_zero())
    throw DomainError("normalization: type-I constant matrix is singular");
  ExtReal one = ExtReal::from_long(1, a11.bits());
  NormalizationMatrix D{one / a11, -(a21 / (a11 * a22)), one / a22};
  return D;
}

}  // namespace

NormalizationMatrix besselK_normalization(const ExtReal& alpha, const ExtReal& nu,
                                          const PrecisionContext& ctx) {
  if (!(alpha > ctx.real(-1))) throw DomainError("besselK: alpha must be > -1");
  if (nu.sign() < 0) throw DomainError("besselK: nu must be >= 0");
  ExtReal one = ctx.real(1);
  ExtReal g1 = gamma(alpha + nu + 1, ctx) * gamma(alpha + 1, ctx);
  ExtReal g2 = gamma(alpha + nu + 2, ctx) * gamma(alpha + 2, ctx);
  ExtReal a11 = one / g1;
  ExtReal a21 = -((alpha + nu + 1) / g2);
  ExtReal a22 = one / g2;
  return invert_lower(a11, a21, a22);
}

NormalizationMatrix besselI_normalization(const ExtReal& nu, const ExtReal& c,
                                          const PrecisionContext& ctx) {
  if (!(nu > ctx.real(-1))) throw DomainError("besselI: nu must be > -1");
  if (c.sign() <= 0) throw DomainError("besselI: c must be > 0");
  const mpfr_prec_t bits = ctx.working_bits();
  ExtReal cc(bits);
  mpfr_set(cc.raw(), c.raw(), MPFR_RNDN);
  ExtReal scale = exp(-(ctx.real(1) / cc));
  ExtReal a11 = scale * pow(cc, nu + 1);
  ExtReal a21 = -(scale * pow(cc, nu + 2));
  ExtReal a22 = scale * pow(cc, nu + 3);
  return invert_lower(a11, a21, a22);
}

WeightSystem::WeightSystem(Kind kind, std::string p1, std::string p2)
    : kind_(kind), param1_(std::move(p1)), param2_(std::move(p2)) {}

WeightSystem::WeightSystem(CustomSpec spec)
    : kind_(Kind::CustomStepline), custom_(std::make_shared<const CustomSpec>(std::move(spec))) {}

WeightSystem WeightSystem::besselK(const std::string& alpha, const std::string& nu) {
  ExtReal a = parse_param(alpha, "alpha");
  ExtReal v = parse_param(nu, "nu");
  if (!(a > ExtReal::from_long(-1, kCheckBits))) throw DomainError("besselK: alpha must be > -1");
  if (v.sign() < 0) throw DomainError("besselK: nu must be >= 0");
  return WeightSystem(Kind::BesselK, alpha, nu);
}

WeightSystem WeightSystem::besselI(const std::string& nu, const std::string& c) {
  ExtReal v = parse_param(nu, "nu");
  ExtReal cc = parse_param(c, "c");
  if (!(v > ExtReal::from_long(-1, kCheckBits))) throw DomainError("besselI: nu must be > -1");
  if (cc.sign() <= 0) throw DomainError("besselI: c must be > 0");
  return WeightSystem(Kind::BesselI, nu, c);
}

WeightSystem WeightSystem::custom(CustomSpec spec) {
  if (spec.b.empty()) throw IncompleteInputError("custom system: table b is empty");
  auto check_table = [](const std::vector<std::string>& t, const char* name) {
    for (size_t i = 0; i < t.size(); ++i)
      (void)parse_param(t[i], (std::string(name) + "[" + std::to_string(i) + "]").c_str());
  };
  check_table(spec.b, "b");
  check_table(spec.c, "c");
  check_table(spec.d, "d");
  check_table(spec.moments1, "moments1");
  check_table(spec.moments2, "moments2");
  if (spec.D) {
    ExtReal d11 = parse_param((*spec.D)[0], "D[1][1]");
    (void)parse_param((*spec.D)[1], "D[2][1]");
    ExtReal d22 = parse_param((*spec.D)[2], "D[2][2]");
    if (d11.is_zero() || d22.is_zero())
      throw DomainError("custom system: D must have nonzero diagonal");
  }
  return WeightSystem(std::move(spec));
}

WeightSystem WeightSystem::custom_from_json(const nlohmann::json& j) {
  CustomSpec spec;
  auto read_array = [&j](const char* key, std::vector<std::string>& out, bool required) {
    if (!j.contains(key)) {
      if (required) throw IncompleteInputError(std::string("custom system: missing array \"") + key + "\"");
      return;
    }
    for (const auto& e : j.at(key)) out.push_back(e.get<std::string>());
  };
  read_array("b", spec.b, true);
  read_array("c", spec.c, true);
  read_array("d", spec.d, true);
  if (j.contains("D")) {
    const auto& D = j.at("D");
    if (!D.is_array() || D.size() != 2 || D[0].size() != 2 || D[1].size() != 2)
      throw IncompleteInputError("custom system: D must be a 2x2 array");
    ExtReal upper = parse_param(D[0][1].get<std::string>(), "D[1][2]");
    if (!upper.is_zero()) throw DomainError("custom system: D must be lower triangular");
    spec.D = {D[0][0].get<std::string>(), D[1][0].get<std::string>(), D[1][1].get<std::string>()};
  }
  read_array("moments1", spec.moments1, false);
  read_array("moments2", spec.moments2, false);
  return custom(std::move(spec));
}

WeightSystem WeightSystem::custom_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IncompleteInputError("custom system: cannot open \"" + path + "\"");
  nlohmann::json j = nlohmann::json::parse(in);
  return custom_from_json(j);
}

CoeffTriple WeightSystem::coeffs(int n, const PrecisionContext& ctx) const {
  switch (kind_) {
    case Kind::BesselK:
      return besselK_coeffs(ctx.real(param1_), ctx.real(param2_), n, ctx);
    case Kind::BesselI:
      return besselI_coeffs(ctx.real(param1_), ctx.real(param2_), n, ctx);
    case Kind::CustomStepline: {
      check_index(n, 0, "custom coefficients");
      const CustomSpec& s = *custom_;
      auto fetch = [&ctx, n](const std::vector<std::string>& t, int first, const char* name) {
        int i = n - first;
        if (i < 0) return ctx.zero();
        if (static_cast<size_t>(i) >= t.size())
          throw IncompleteInputError(std::string("custom system: table ") + name +
                                     " has no entry for index " + std::to_string(n));
        return ctx.real(t[static_cast<size_t>(i)]);
      };
      return CoeffTriple{fetch(s.b, 0, "b"), fetch(s.c, 1, "c"), fetch(s.d, 2, "d")};
    }
  }
  throw Error("unreachable");
}

SteplineCoefficients WeightSystem::stepline() const {
  WeightSystem self = *this;
  auto pick = [self](int which) {
    return [self, which](int n, const PrecisionContext& ctx) -> ExtReal {
      CoeffTriple t = self.coeffs(n, ctx);
      return which == 0 ? t.b : which == 1 ? t.c : t.d;
    };
  };
  return SteplineCoefficients(pick(0), pick(1), pick(2));
}

bool WeightSystem::has_normalization() const noexcept {
  return kind_ != Kind::CustomStepline || custom_->D.has_value();
}

NormalizationMatrix WeightSystem::normalization(const PrecisionContext& ctx) const {
  switch (kind_) {
    case Kind::BesselK:
      return besselK_normalization(ctx.real(param1_), ctx.real(param2_), ctx);
    case Kind::BesselI:
      return besselI_normalization(ctx.real(param1_), ctx.real(param2_), ctx);
    case Kind::CustomStepline: {
      if (!custom_->D)
        throw IncompleteInputError("custom system: no normalization matrix supplied");
      const auto& D = *custom_->D;
      return NormalizationMatrix{ctx.real(D[0]), ctx.real(D[1]), ctx.real(D[2])};
    }
  }
  throw Error("unreachable");
}

bool WeightSystem::has_moments(int measure) const noexcept {
  if (kind_ != Kind::CustomStepline) return true;
  return !(measure == 1 ? custom_->moments1 : custom_->moments2).empty();
}

ExtReal WeightSystem::moment(int measure, int n, const PrecisionContext& ctx) const {
  if (measure != 1 && measure != 2) throw DomainError("moment: measure index must be 1 or 2");
  if (n < 0) throw DomainError("moment: degree must be >= 0");
  switch (kind_) {
    case Kind::BesselK: {
      // int x^n x^alpha rho_{nu_j}(x) dx = Gamma(n+alpha+nu_j+1) Gamma(n+alpha+1)
      ExtReal a = ctx.real(param1_);
      ExtReal vj = ctx.real(param2_) + (measure - 1);
      return gamma(a + vj + (n + 1), ctx) * gamma(a + (n + 1), ctx);
    }
    case Kind::BesselI: {
      // term-wise integration of the Bessel series:
      //   sum_k Gamma(n+k+vj+1) / (k! Gamma(k+vj+1) c^{n+k+vj+1})
      ExtReal vj = ctx.real(param1_) + (measure - 1);
      ExtReal c = ctx.real(param2_);
      ExtReal term = gamma(vj + (n + 1), ctx) / (gamma(vj + 1, ctx) * pow(c, vj + (n + 1)));
      ExtReal sum = term;
      ExtReal cutoff = ctx.pow10(-ctx.working_digits());
      for (long k = 0;; ++k) {
        term = term * (vj + (n + k + 1)) / ((vj + (k + 1)) * (k + 1) * c);
        sum += term;
        if (term < cutoff * sum) break;
        if (k > 1000000) throw Error("besselI moment: series failed to converge");
      }
      return sum;
    }
    case Kind::CustomStepline: {
      const auto& t = measure == 1 ? custom_->moments1 : custom_->moments2;
      if (static_cast<size_t>(n) >= t.size())
        throw UnsupportedOracleError("custom system: no moment of degree " + std::to_string(n) +
                                     " for measure " + std::to_string(measure));
      return ctx.real(t[static_cast<size_t>(n)]);
    }
  }
  throw Error("unreachable");
}

nlohmann::json WeightSystem::descriptor() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::BesselK:
      j["kind"] = "besselK";
      j["alpha"] = param1_;
      j["nu"] = param2_;
      break;
    case Kind::BesselI:
      j["kind"] = "besselI";
      j["nu"] = param1_;
      j["c"] = param2_;
      break;
    case Kind::CustomStepline: {
      j["kind"] = "custom";
      j["b"] = custom_->b;
      j["c"] = custom_->c;
      j["d"] = custom_->d;
      if (custom_->D) {
        const auto& D = *custom_->D;
        j["D"] = nlohmann::json::array({{D[0], "0"}, {D[1], D[2]}});
      }
      if (!custom_->moments1.empty()) j["moments1"] = custom_->moments1;
      if (!custom_->moments2.empty()) j["moments2"] = custom_->moments2;
      break;
    }
  }
  return j;
}

ExtReal moment(const WeightSystem& system, int measure, int n, const PrecisionContext& ctx) {
  return system.moment(measure, n, ctx);
}

}  // namespace simquad
