#pragma once

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bol/config.hpp"
#include "bol/harness.hpp"
#include "bol/operators.hpp"
#include "bol/report.hpp"
#include "bol/spec_io.hpp"

namespace bol::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;

/// Folds the per-(Φ, α) reports of one suite into a single report.
inline VerificationReport merge_reports(const std::string& suite,
                                        const std::vector<std::pair<std::string, VerificationReport>>& runs,
                                        std::uint64_t seed, const std::string& config_hash) {
  VerificationReport out;
  out.suite = suite;
  out.seed = seed;
  out.inputs["config_hash"] = config_hash;
  out.inputs["runs"] = std::to_string(runs.size());
  for (const auto& [tag, r] : runs) {
    for (const auto& [k, v] : r.inputs) out.inputs["[" + tag + "] " + k] = v;
    for (auto c : r.cases) {
      c.id = "[" + tag + "] " + c.id;
      out.cases.push_back(std::move(c));
    }
    for (const auto& [k, v] : r.constants) out.constants["[" + tag + "] " + k] = v;
    out.constants["[" + tag + "] verdict_code"] = static_cast<double>(exit_code(r.verdict));
    for (const auto& id : r.rules) out.add_rule(id);
    for (const auto& n : r.notes) out.notes.push_back("[" + tag + "] " + n);
    out.verdict = worst(out.verdict, r.verdict);
  }
  return out;
}

inline std::string tag_of(const std::string& phi, double alpha) { return "phi=" + phi + ";alpha=" + fmt_g(alpha); }

/// Runs one suite over its (Φ, α) grid.
inline VerificationReport run_suite(const std::string& suite, const RunConfig& cfg) {
  const auto grid = cfg.grid_for(suite);
  HarnessSettings hs = cfg.harness;
  hs.rules = cfg.rules;
  hs.rules.seed = cfg.seed;
  std::vector<std::pair<std::string, VerificationReport>> runs;
  if (suite == "interpolation_power") {
    for (double a : grid.alphas)
      runs.emplace_back("alpha=" + fmt_g(a), verify_interpolation_power(cfg.interp_p0, cfg.interp_p1,
                                                                        cfg.interp_theta, make_measure(cfg.n, a), hs));
  } else if (suite == "small_type") {
    for (double p : cfg.small_type_p)
      for (double a : grid.alphas) {
        const auto mu = make_measure(cfg.n, a);
        const auto fam = default_family(cfg.n, growth::power(p), a, cfg.seed);
        runs.emplace_back("p=" + fmt_g(p) + ";alpha=" + fmt_g(a), verify_small_type(p, mu, fam, hs));
      }
  } else {
    if (suite == "cesaro_boundedness")
      for (const auto& s : cfg.symbols) {
        const CesaroSymbol g(s.g);
        if (!(bloch_seminorm(g).M > 0.0))
          throw PreconditionError("cesaro_boundedness: symbol '" + s.label + "' has M = 0");
      }
    for (const auto& id : grid.phis)
      for (double a : grid.alphas) {
        const auto phi = parse_growth(id);
        const auto mu = make_measure(cfg.n, a);
        const std::string tag = tag_of(id, a);
        if (suite == "derivative_equivalence") {
          runs.emplace_back(tag, verify_derivative_equivalence(phi, mu, default_family(cfg.n, phi, a, cfg.seed), hs));
        } else if (suite == "pointwise_estimates") {
          runs.emplace_back(tag, verify_pointwise_estimates(phi, mu, default_family(cfg.n, phi, a, cfg.seed), hs));
        } else if (suite == "test_functions") {
          const double k = cfg.k > 0.0 ? cfg.k : default_test_exponent(phi);
          runs.emplace_back(tag, verify_test_functions(phi, mu, k, hs));
        } else if (suite == "cesaro_boundedness") {
          auto fam = default_family(cfg.n, phi, a, cfg.seed);
          fam.insert(fam.begin(), FamilyMember{"1", Series::constant(cfg.n, 1.0)});
          runs.emplace_back(tag, verify_cesaro_boundedness(cfg.symbols, phi, mu, fam, hs));
        } else if (suite == "cesaro_compactness") {
          runs.emplace_back(tag, verify_cesaro_compactness(cfg.compactness_symbol, phi, mu, cfg.radii, hs, cfg.k));
        } else {
          throw UnknownSuiteError("unknown suite '" + suite + "'");
        }
      }
  }
  return merge_reports(suite, runs, cfg.seed, cfg.hash());
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct Options {
  std::string config;
  std::string function;
  std::string symbol;
  std::string suite;
  std::string out;
  std::string phi;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  long long seed = -1;
  int threads = 0;
  bool check = false;
  bool refine = false;
  bool csv = false;
};

inline RunConfig config_of(const Options& o) {
  RunConfig cfg = o.config.empty() ? default_config() : load_config(o.config);
  if (o.seed >= 0) {
    cfg.seed = static_cast<std::uint64_t>(o.seed);
    cfg.document["seed"] = cfg.seed;
  }
  if (o.threads > 0) cfg.threads = o.threads;
  if (o.refine) {
    cfg.harness.extra_refinement = true;
    cfg.document["refine"] = true;
  }
  if (!o.suite.empty()) {
    cfg.suites = split_commas(o.suite);
    for (const auto& s : cfg.suites)
      if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end())
        throw UnknownSuiteError("unknown suite '" + s + "'");
    cfg.document["suites"] = cfg.suites;
  }
  set_thread_count(cfg.threads);
  return cfg;
}

inline void emit(const Options& o, const std::string& name, const nlohmann::json& j, std::ostream& out) {
  if (o.out.empty()) {
    out << dump(j);
    return;
  }
  std::filesystem::create_directories(o.out);
  write_file(std::filesystem::path(o.out) / name, dump(j));
}

inline int cmd_norm(const Options& o, std::ostream& out) {
  const RunConfig cfg = config_of(o);
  const auto f = parse_function(read_json_file(o.function));
  const std::string phi_id = o.phi.empty() ? cfg.phis.front() : o.phi;
  const double alpha = std::isnan(o.alpha) ? cfg.alphas.front() : o.alpha;
  const auto phi = parse_growth(phi_id);
  const auto mu = make_measure(f.dim(), alpha);
  RuleSettings rs = cfg.rules;
  if (o.refine) rs.refine = 1;
  const auto rule = rule_for(f, mu, rs);
  const auto nrm = luxemburg_norm(f, phi, rule);
  char line[256];
  std::snprintf(line, sizeof line, "lambda*=%.15g residual=%.3g iterations=%d rule=%s\n", nrm.lambda_star,
                nrm.residual, nrm.iterations, rule.id.c_str());
  out << line;
  nlohmann::json j = {{"schema", kReportSchema}, {"command", "norm"},      {"phi", phi_id},
                      {"alpha", alpha},          {"n", f.dim()},           {"lambda_star", nrm.lambda_star},
                      {"residual", nrm.residual}, {"iterations", nrm.iterations}, {"rule", rule.id},
                      {"nodes", rule.size()}};
  emit(o, "norm.json", j, out);
  return kExitPass;
}

inline int cmd_cesaro(const Options& o, std::ostream& out) {
  const RunConfig cfg = config_of(o);
  const auto g = parse_function(read_json_file(o.symbol));
  const auto f = parse_function(read_json_file(o.function));
  const CesaroSymbol sym(g);
  const Series* fs = f.as_series();
  if (!fs) throw FormatError("cesaro: the function must be a series");
  const Series t = cesaro_apply_exact(sym, *fs);
  for (const auto& [m, c] : t.terms()) {
    std::string idx;
    for (int i = 0; i < t.dim(); ++i) idx += (i ? "," : "") + std::to_string(m[i]);
    char buf[128];
    std::snprintf(buf, sizeof buf, "z^(%s): %.17g%+.17gi\n", idx.c_str(), c.real(), c.imag());
    out << buf;
  }
  nlohmann::json j = {{"schema", kReportSchema}, {"command", "cesaro"}, {"result", series_to_json(t)}};
  int code = kExitPass;
  if (o.check) {
    SplitMix64 rng(cfg.seed);
    double worst_dev = 0.0;
    for (int i = 0; i < 10; ++i) {
      Point z(t.dim());
      for (int k = 0; k < t.dim(); ++k) z[k] = std::polar(std::sqrt(rng.uniform()) * 0.95 / std::sqrt(t.dim()), 2.0 * std::numbers::pi * rng.uniform());
      const cplx a = eval(t, z), b = cesaro_apply_numeric(sym, f, z);
      worst_dev = std::max(worst_dev, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
    j["check"] = {{"points", 10}, {"max_deviation", worst_dev}, {"pass", worst_dev <= 1e-10}};
    char buf[96];
    std::snprintf(buf, sizeof buf, "check: max deviation %.3g over 10 points\n", worst_dev);
    out << buf;
    if (worst_dev > 1e-10) code = kExitFail;
  }
  if (!o.out.empty()) emit(o, "cesaro.json", j, out);
  return code;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  const RunConfig cfg = config_of(o);
  Verdict overall = Verdict::pass;
  for (const auto& suite : cfg.suites) {
    const auto rep = run_suite(suite, cfg);
    overall = worst(overall, rep.verdict);
    const std::string text = dump(to_json(rep));
    if (!o.out.empty()) {
      std::filesystem::create_directories(o.out);
      write_file(std::filesystem::path(o.out) / (suite + ".json"), text);
      if (o.csv) write_file(std::filesystem::path(o.out) / (suite + ".csv"), to_csv(rep));
    }
    out << suite << ": " << to_string(rep.verdict) << " (" << rep.cases.size() << " cases)\n";
  }
  out << "overall: " << to_string(overall) << "\n";
  return exit_code(overall);
}

/// Entry point; returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Bergman-Orlicz workbench"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sc) {
    sc->add_option("--config", o.config, "Config document (JSON)");
    sc->add_option("--seed", o.seed, "Seed override");
    sc->add_option("--out", o.out, "Output directory");
    sc->add_option("--threads", o.threads, "Worker threads");
    sc->add_flag("--refine", o.refine, "One extra refinement pass");
  };
  auto* norm = app.add_subcommand("norm", "Luxemburg norm of a function");
  common(norm);
  norm->add_option("--function", o.function, "Function spec (JSON)")->required();
  norm->add_option("--phi", o.phi, "Growth function id");
  norm->add_option("--alpha", o.alpha, "Weight exponent");
  auto* ces = app.add_subcommand("cesaro", "Coefficients of T_g f");
  common(ces);
  ces->add_option("--symbol", o.symbol, "Symbol spec (JSON)")->required();
  ces->add_option("--function", o.function, "Function spec (JSON)")->required();
  ces->add_flag("--check", o.check, "Cross-check against the quadrature oracle");
  auto* ver = app.add_subcommand("verify", "Run verification suites");
  common(ver);
  ver->add_option("--suite", o.suite, "Suite name(s), comma separated");
  ver->add_flag("--csv", o.csv, "Also write per-case CSV");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : kExitUsage;
  }
  try {
    if (*norm) return cmd_norm(o, out);
    if (*ces) return cmd_cesaro(o, out);
    return cmd_verify(o, out);
  } catch (const UnknownSuiteError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const PreconditionError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const SymbolInvariantError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace bol::cli
