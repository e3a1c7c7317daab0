// Command-line front end: builds simultaneous quadrature rules, evaluates
// the built-in test integrals, and verifies exactness degrees.
//
// Exit codes: 0 success, 2 usage or parameter error, 3 numeric failure,
// 4 verification failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <array>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "simquad/quadrature.hpp"

namespace {

using namespace simquad;

struct CliConfig {
  std::string system;
  std::string alpha, nu, c;
  std::string coeffs_path;
  int N = 0;
  int digits = 50;
  std::string integrand = "one";
  std::string format = "table";
  std::string out_path;
};

WeightSystem make_system(const CliConfig& cfg) {
  if (cfg.system == "besselK") {
    if (cfg.alpha.empty() || cfg.nu.empty())
      throw DomainError("besselK requires --alpha and --nu");
    return WeightSystem::besselK(cfg.alpha, cfg.nu);
  }
  if (cfg.system == "besselI") {
    if (cfg.nu.empty() || cfg.c.empty()) throw DomainError("besselI requires --nu and --c");
    return WeightSystem::besselI(cfg.nu, cfg.c);
  }
  if (cfg.system == "custom") {
    if (cfg.coeffs_path.empty()) throw DomainError("custom requires --coeffs <path>");
    return WeightSystem::custom_from_file(cfg.coeffs_path);
  }
  throw DomainError("unknown system \"" + cfg.system + "\" (besselK, besselI or custom)");
}

Integrand make_integrand(const std::string& name) {
  if (name == "one")
    return [](const ExtReal& x, const PrecisionContext& ctx) {
      (void)x;
      return ctx.real(1);
    };
  if (name == "exp_neg")
    return [](const ExtReal& x, const PrecisionContext& ctx) { return exp_neg(x, ctx); };
  if (name == "cos")
    return [](const ExtReal& x, const PrecisionContext& ctx) { return cos_fn(x, ctx); };
  if (name.rfind("power:", 0) == 0) {
    unsigned long k = std::stoul(name.substr(6));
    return [k](const ExtReal& x, const PrecisionContext&) { return pow_ui(x, k); };
  }
  if (name.rfind("polycoeffs:", 0) == 0) {
    std::vector<std::string> coeffs;
    std::stringstream ss(name.substr(11));
    std::string item;
    while (std::getline(ss, item, ',')) coeffs.push_back(item);
    if (coeffs.empty()) throw DomainError("polycoeffs: needs at least one coefficient");
    return [coeffs](const ExtReal& x, const PrecisionContext& ctx) {
      ExtReal acc(ctx.working_bits());
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + ctx.real(*it);
      return acc;
    };
  }
  throw DomainError("unknown integrand \"" + name +
                    "\" (one, exp_neg, cos, power:k, polycoeffs:a0,a1,...)");
}

void emit(const CliConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw DomainError("cannot open output file \"" + cfg.out_path + "\"");
  out << text;
}

std::string render_rule_table(const QuadratureRule& rule) {
  const int frac = std::min(rule.digits, 20);
  std::vector<std::array<std::string, 4>> rows;
  rows.push_back({"j", "node", "weight1", "weight2"});
  for (int j = 0; j < rule.n_nodes; ++j) {
    rows.push_back({std::to_string(j + 1), rule.nodes[static_cast<size_t>(j)].fixed(frac),
                    rule.weights1[static_cast<size_t>(j)].fixed(frac),
                    rule.weights2[static_cast<size_t>(j)].fixed(frac)});
  }
  std::array<size_t, 4> width{0, 0, 0, 0};
  for (const auto& r : rows)
    for (int i = 0; i < 4; ++i) width[static_cast<size_t>(i)] = std::max(width[static_cast<size_t>(i)], r[static_cast<size_t>(i)].size());
  std::ostringstream os;
  for (const auto& r : rows) {
    for (int i = 0; i < 4; ++i) {
      if (i) os << "  ";
      os << std::string(width[static_cast<size_t>(i)] - r[static_cast<size_t>(i)].size(), ' ')
         << r[static_cast<size_t>(i)];
    }
    os << "\n";
  }
  return os.str();
}

std::string render_rule_csv(const QuadratureRule& rule) {
  std::ostringstream os;
  os << "j,node,weight1,weight2\n";
  for (int j = 0; j < rule.n_nodes; ++j)
    os << j + 1 << "," << rule.nodes[static_cast<size_t>(j)].sci(rule.digits) << ","
       << rule.weights1[static_cast<size_t>(j)].sci(rule.digits) << ","
       << rule.weights2[static_cast<size_t>(j)].sci(rule.digits) << "\n";
  return os.str();
}

int cmd_rule(const CliConfig& cfg) {
  WeightSystem system = make_system(cfg);
  PrecisionContext ctx(cfg.digits);
  QuadratureRule rule = make_rule(system, cfg.N, ctx);
  if (cfg.format == "json")
    emit(cfg, rule_to_json(rule) + "\n");
  else if (cfg.format == "csv")
    emit(cfg, render_rule_csv(rule));
  else
    emit(cfg, render_rule_table(rule));
  return 0;
}

int cmd_integrate(const CliConfig& cfg) {
  WeightSystem system = make_system(cfg);
  PrecisionContext ctx(cfg.digits);
  QuadratureRule rule = make_rule(system, cfg.N, ctx);
  auto [i1, i2] = integrate(rule, make_integrand(cfg.integrand));
  std::ostringstream os;
  if (cfg.format == "json") {
    nlohmann::json j;
    j["I1"] = i1.sci(cfg.digits);
    j["I2"] = i2.sci(cfg.digits);
    j["N"] = cfg.N;
    j["digits"] = cfg.digits;
    j["f"] = cfg.integrand;
    os << j.dump() << "\n";
  } else if (cfg.format == "csv") {
    os << "I1,I2,N,digits\n"
       << i1.sci(cfg.digits) << "," << i2.sci(cfg.digits) << "," << cfg.N << "," << cfg.digits
       << "\n";
  } else {
    os << "I1 = " << i1.sci(cfg.digits) << "\n"
       << "I2 = " << i2.sci(cfg.digits) << "\n"
       << "N = " << cfg.N << "\n"
       << "digits = " << cfg.digits << "\n";
  }
  emit(cfg, os.str());
  return 0;
}

int cmd_verify(const CliConfig& cfg) {
  WeightSystem system = make_system(cfg);
  PrecisionContext ctx(cfg.digits);
  QuadratureRule rule = make_rule(system, cfg.N, ctx);
  ExactnessReport report = verify_exactness(rule, system, ctx);
  std::ostringstream os;
  if (cfg.format == "json") {
    nlohmann::json j;
    j["N"] = report.n_nodes;
    j["digits"] = report.digits;
    j["measure1"]["claimed_degree"] = report.claimed_degree1;
    j["measure1"]["pass"] = report.pass1;
    j["measure2"]["claimed_degree"] = report.claimed_degree2;
    j["measure2"]["pass"] = report.pass2;
    nlohmann::json e1 = nlohmann::json::array(), e2 = nlohmann::json::array();
    for (const ExtReal& e : report.errors1) e1.push_back(e.sci(3));
    for (const ExtReal& e : report.errors2) e2.push_back(e.sci(3));
    j["measure1"]["errors"] = e1;
    j["measure2"]["errors"] = e2;
    os << j.dump() << "\n";
  } else if (cfg.format == "csv") {
    os << "measure,degree,relative_error\n";
    for (size_t m = 0; m < report.errors1.size(); ++m)
      os << "1," << m << "," << report.errors1[m].sci(3) << "\n";
    for (size_t m = 0; m < report.errors2.size(); ++m)
      os << "2," << m << "," << report.errors2[m].sci(3) << "\n";
  } else {
    os << "measure 1: exact through degree " << report.claimed_degree1 << " -> "
       << (report.pass1 ? "pass" : "FAIL") << "\n";
    for (size_t m = 0; m < report.errors1.size(); ++m)
      os << "  degree " << m << ": rel err " << report.errors1[m].sci(3) << "\n";
    os << "measure 2: exact through degree " << report.claimed_degree2 << " -> "
       << (report.pass2 ? "pass" : "FAIL") << "\n";
    for (size_t m = 0; m < report.errors2.size(); ++m)
      os << "  degree " << m << ": rel err " << report.errors2[m].sci(3) << "\n";
  }
  emit(cfg, os.str());
  return report.pass() ? 0 : 4;
}

void add_common(CLI::App* sub, CliConfig& cfg, bool with_integrand) {
  sub->add_option("--system", cfg.system, "besselK, besselI or custom")->required();
  sub->add_option("--alpha", cfg.alpha, "besselK parameter alpha (> -1), decimal string");
  sub->add_option("--nu", cfg.nu, "nu parameter, decimal string");
  sub->add_option("--c", cfg.c, "besselI parameter c (> 0), decimal string");
  sub->add_option("--coeffs", cfg.coeffs_path, "JSON file with custom stepline tables");
  sub->add_option("--N", cfg.N, "number of quadrature nodes (>= 1)")
      ->required()
      ->check(CLI::PositiveNumber);
  sub->add_option("--digits", cfg.digits, "reported decimal digits (>= 10)")
      ->check(CLI::Range(10, 100000));
  if (with_integrand)
    sub->add_option("--f", cfg.integrand, "one, exp_neg, cos, power:k or polycoeffs:a0,a1,...");
  sub->add_option("--format", cfg.format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  sub->add_option("--out", cfg.out_path, "write output to a file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simultaneous Gaussian quadrature rules for pairs of measures"};
  app.require_subcommand(1);
  CliConfig cfg;
  CLI::App* rule = app.add_subcommand("rule", "compute nodes and both weight vectors");
  add_common(rule, cfg, false);
  CLI::App* integ = app.add_subcommand("integrate", "apply a rule to a named integrand");
  add_common(integ, cfg, true);
  CLI::App* verify = app.add_subcommand("verify", "check exactness degrees against moments");
  add_common(verify, cfg, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (rule->parsed()) return cmd_rule(cfg);
    if (integ->parsed()) return cmd_integrate(cfg);
    return cmd_verify(cfg);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
