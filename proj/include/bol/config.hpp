#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bol/error.hpp"
#include "bol/growth_id.hpp"
#include "bol/harness.hpp"
#include "bol/spec_io.hpp"

namespace bol {

inline constexpr const char* kConfigSchema = "bol-config/1";

/// lower/M threshold for the boundedness suite, from tests/oracles/cesaro_bracket.py.
inline constexpr double kDefaultCMin = 0.51;

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s{"derivative_equivalence", "pointwise_estimates", "test_functions",
                                          "cesaro_boundedness",     "cesaro_compactness",  "interpolation_power",
                                          "small_type"};
  return s;
}

/// Unknown suite name (a usage error rather than a malformed document).
class UnknownSuiteError : public Error {
 public:
  using Error::Error;
};

struct SuiteGrid {
  std::vector<std::string> phis;
  std::vector<double> alphas;
};

struct RunConfig {
  int n = 1;
  std::vector<double> alphas{0.0};
  std::vector<std::string> phis{"power:p=2"};
  RuleSettings rules;
  std::uint64_t seed = 1;
  int threads = 1;
  std::vector<std::string> suites{"derivative_equivalence"};
  HarnessSettings harness;
  std::vector<SymbolMember> symbols;
  SymbolMember compactness_symbol;
  std::vector<double> radii{0.5, 0.9, 0.99, 0.999};
  double k = 0.0;  ///< 0: smallest admissible exponent per Φ
  double interp_p0 = 2.0, interp_p1 = 4.0, interp_theta = 0.5;
  std::vector<double> small_type_p{1.0, 0.5, 2.0 / 3.0};
  std::map<std::string, SuiteGrid> overrides;
  nlohmann::json document;  ///< the parsed document, for hashing

  SuiteGrid grid_for(const std::string& suite) const {
    SuiteGrid g{phis, alphas};
    auto it = overrides.find(suite);
    if (it != overrides.end()) {
      if (!it->second.phis.empty()) g.phis = it->second.phis;
      if (!it->second.alphas.empty()) g.alphas = it->second.alphas;
    }
    return g;
  }

  /// Hash of the document without the thread count.
  std::string hash() const {
    auto d = document;
    if (d.is_object()) d.erase("threads");
    return hex64(fnv1a(d.dump()));
  }
};

namespace detail {

inline std::vector<double> number_list(const nlohmann::json& j, const char* what) {
  std::vector<double> out;
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw FormatError(std::string(what) + ": expected a number or an array of numbers");
  for (const auto& v : j) {
    if (!v.is_number()) throw FormatError(std::string(what) + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const char* what) {
  if (j.is_string()) return {j.get<std::string>()};
  if (!j.is_array()) throw FormatError(std::string(what) + ": expected a string or an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw FormatError(std::string(what) + ": expected strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

inline void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw FormatError(where + ": unknown key '" + it.key() + "'");
}

inline SymbolMember symbol_of(const nlohmann::json& j) {
  if (j.is_object() && j.contains("spec")) {
    const std::string label = j.contains("label") ? j.at("label").get<std::string>() : "g";
    return {label, parse_function(j.at("spec"))};
  }
  return {"g", parse_function(j)};
}

inline Series poly1(int n, std::initializer_list<std::pair<int, double>> terms) {
  Series s(n);
  for (auto [d, c] : terms) {
    MultiIndex m{};
    m[0] = d;
    s.add_term(m, c);
  }
  return s;
}

}  // namespace detail

/// The default symbol family {z₁, z₁², z₁ + z₁²}.
inline std::vector<SymbolMember> default_symbols(int n) {
  return {{"z", detail::poly1(n, {{1, 1.0}})},
          {"z^2", detail::poly1(n, {{2, 1.0}})},
          {"z+z^2", detail::poly1(n, {{1, 1.0}, {2, 1.0}})}};
}

inline RunConfig parse_config(const nlohmann::json& j) {
  RunConfig c;
  try {
    if (!j.is_object()) throw FormatError("config: expected a JSON object");
    if (!j.contains("schema") || j.at("schema") != kConfigSchema)
      throw FormatError(std::string("config: schema must be \"") + kConfigSchema + "\"");
    detail::check_keys(j,
                       {"schema", "n", "alpha", "phi", "quadrature", "seed", "threads", "suites", "tolerances",
                        "symbols", "compactness", "radii", "k", "interpolation", "small_type", "overrides", "c_min"},
                       "config");
    c.document = j;
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (c.n < 1 || c.n > kMaxDim) throw FormatError("config: n must be in [1, 4]");
    if (j.contains("alpha")) c.alphas = detail::number_list(j.at("alpha"), "alpha");
    for (double a : c.alphas)
      if (!(a > -1.0)) throw FormatError("config: alpha must exceed -1");
    if (j.contains("phi")) c.phis = detail::string_list(j.at("phi"), "phi");
    for (const auto& id : c.phis) parse_growth(id);
    if (j.contains("quadrature")) {
      const auto& q = j.at("quadrature");
      detail::check_keys(q, {"degree", "sample_count", "seed"}, "quadrature");
      if (q.contains("degree")) c.rules.degree = q.at("degree").get<int>();
      if (q.contains("sample_count")) c.rules.samples = q.at("sample_count").get<std::size_t>();
      if (q.contains("seed")) c.rules.seed = q.at("seed").get<std::uint64_t>();
      if (c.rules.degree < 0) throw FormatError("quadrature: degree must be >= 0");
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("suites")) c.suites = detail::string_list(j.at("suites"), "suites");
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      detail::check_keys(t, {"drift_pass", "drift_fail", "chain", "upper", "scaling", "test_bracket"}, "tolerances");
      auto set = [&](const char* k, double& v) {
        if (t.contains(k)) v = t.at(k).get<double>();
      };
      set("drift_pass", c.harness.drift_pass);
      set("drift_fail", c.harness.drift_fail);
      set("chain", c.harness.chain_tol);
      set("upper", c.harness.upper_tol);
      set("scaling", c.harness.scaling_tol);
      set("test_bracket", c.harness.test_bracket);
    }
    c.harness.c_min = j.contains("c_min") ? j.at("c_min").get<double>() : kDefaultCMin;
    c.symbols = default_symbols(c.n);
    if (j.contains("symbols")) {
      c.symbols.clear();
      for (const auto& s : j.at("symbols")) c.symbols.push_back(detail::symbol_of(s));
    }
    c.compactness_symbol = default_symbols(c.n).front();
    if (j.contains("compactness")) {
      const auto& cj = j.at("compactness");
      detail::check_keys(cj, {"symbol"}, "compactness");
      if (cj.contains("symbol")) c.compactness_symbol = detail::symbol_of(cj.at("symbol"));
    }
    if (j.contains("radii")) c.radii = detail::number_list(j.at("radii"), "radii");
    if (j.contains("k")) c.k = j.at("k").get<double>();
    if (j.contains("interpolation")) {
      const auto& ij = j.at("interpolation");
      detail::check_keys(ij, {"p0", "p1", "theta"}, "interpolation");
      if (ij.contains("p0")) c.interp_p0 = ij.at("p0").get<double>();
      if (ij.contains("p1")) c.interp_p1 = ij.at("p1").get<double>();
      if (ij.contains("theta")) c.interp_theta = ij.at("theta").get<double>();
    }
    if (j.contains("small_type")) {
      const auto& sj = j.at("small_type");
      detail::check_keys(sj, {"p"}, "small_type");
      if (sj.contains("p")) c.small_type_p = detail::number_list(sj.at("p"), "small_type.p");
    }
    if (j.contains("overrides")) {
      for (auto it = j.at("overrides").begin(); it != j.at("overrides").end(); ++it) {
        detail::check_keys(it.value(), {"phi", "alpha"}, "overrides." + it.key());
        SuiteGrid g;
        if (it.value().contains("phi")) g.phis = detail::string_list(it.value().at("phi"), "overrides.phi");
        if (it.value().contains("alpha")) g.alphas = detail::number_list(it.value().at("alpha"), "overrides.alpha");
        for (const auto& id : g.phis) parse_growth(id);
        c.overrides[it.key()] = g;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  for (const auto& s : c.suites)
    if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end())
      throw UnknownSuiteError("unknown suite '" + s + "'");
  return c;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
}

inline RunConfig load_config(const std::string& path) { return parse_config(read_json_file(path)); }

inline RunConfig default_config() { return parse_config({{"schema", kConfigSchema}}); }

}  // namespace bol
