#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bol/error.hpp"
#include "bol/growth.hpp"

namespace bol {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline std::string_view strip_parens(std::string_view s) {
  s = trim(s);
  while (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = trim(s.substr(1, s.size() - 2));
  return s;
}

/// Accepts decimals and simple fractions such as "1/3".
inline double parse_number(std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) throw FormatError("empty numeric parameter");
  const auto slash = s.find('/');
  auto one = [](const std::string& t) {
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) throw FormatError("bad number '" + t + "'");
    return v;
  };
  if (slash == std::string::npos) return one(s);
  const double den = one(s.substr(slash + 1));
  if (den == 0.0) throw FormatError("zero denominator in '" + s + "'");
  return one(s.substr(0, slash)) / den;
}

/// "p=2,a=1" -> {p: 2, a: 1}; every key must be in `allowed`.
inline std::map<std::string, double> parse_params(std::string_view body, const std::vector<std::string>& allowed) {
  std::map<std::string, double> out;
  body = trim(body);
  if (body.empty()) return out;
  std::size_t start = 0;
  while (start <= body.size()) {
    auto comma = body.find(',', start);
    if (comma == std::string_view::npos) comma = body.size();
    const auto item = trim(body.substr(start, comma - start));
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw FormatError("expected key=value in '" + std::string(item) + "'");
    const std::string key(trim(item.substr(0, eq)));
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw FormatError("unknown parameter '" + key + "'");
    out[key] = parse_number(item.substr(eq + 1));
    start = comma + 1;
  }
  return out;
}

/// Splits the argument list of an interp id at its top-level keys.
inline std::map<std::string, std::string_view> split_keys(std::string_view body,
                                                          const std::vector<std::string>& keys) {
  std::vector<std::pair<std::size_t, std::string>> marks;
  int depth = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '(') ++depth;
    if (body[i] == ')') --depth;
    if (depth != 0 || (i > 0 && body[i - 1] != ',')) continue;
    for (const auto& k : keys) {
      if (body.substr(i, k.size() + 1) == k + "=") {
        marks.emplace_back(i, k);
        break;
      }
    }
  }
  if (depth != 0) throw FormatError("unbalanced parentheses in growth id");
  std::map<std::string, std::string_view> out;
  for (std::size_t m = 0; m < marks.size(); ++m) {
    const auto [pos, key] = marks[m];
    const std::size_t value_start = pos + key.size() + 1;
    std::size_t value_end = m + 1 < marks.size() ? marks[m + 1].first - 1 : body.size();
    if (out.count(key)) throw FormatError("duplicate key '" + key + "'");
    out[key] = body.substr(value_start, value_end - value_start);
  }
  if (!marks.empty() && marks.front().first != 0) throw FormatError("unexpected text before first key");
  return out;
}

inline double required(const std::map<std::string, double>& m, const std::string& key, const std::string& where) {
  auto it = m.find(key);
  if (it == m.end()) throw FormatError(where + ": missing parameter '" + key + "'");
  return it->second;
}

}  // namespace detail

/// Pseudo-concave parameter function from an id: "power:theta=0.5" or
/// "gp:theta=0.5,alpha=1,beta=0".
inline PseudoConcaveFunction parse_rho(std::string_view id) {
  id = detail::strip_parens(id);
  const auto colon = id.find(':');
  const std::string head(id.substr(0, colon));
  const auto body = colon == std::string_view::npos ? std::string_view{} : id.substr(colon + 1);
  if (head == "power") {
    const auto p = detail::parse_params(body, {"theta"});
    return growth::rho_power(detail::required(p, "theta", "rho power"));
  }
  if (head == "gp") {
    const auto p = detail::parse_params(body, {"theta", "alpha", "beta"});
    const double alpha = p.count("alpha") ? p.at("alpha") : 0.0;
    const double beta = p.count("beta") ? p.at("beta") : 0.0;
    return growth::rho_gp(detail::required(p, "theta", "rho gp"), alpha, beta);
  }
  throw FormatError("unknown rho id '" + std::string(id) + "'");
}

/// Growth function from an id such as "power:p=2", "powerlog:p=2,a=1",
/// "powerinvlog:p=2" or "interp:phi0=...,phi1=...,rho=...". Nested interp
/// arguments must be parenthesized.
inline GrowthFunction parse_growth(std::string_view id) {
  id = detail::strip_parens(id);
  const auto colon = id.find(':');
  if (colon == std::string_view::npos) throw FormatError("growth id needs 'family:params': '" + std::string(id) + "'");
  const std::string head(detail::trim(id.substr(0, colon)));
  const auto body = id.substr(colon + 1);
  if (head == "power") {
    const auto p = detail::parse_params(body, {"p"});
    return growth::power(detail::required(p, "p", "power"));
  }
  if (head == "powerlog") {
    const auto p = detail::parse_params(body, {"p", "a"});
    return growth::powerlog(detail::required(p, "p", "powerlog"), p.count("a") ? p.at("a") : 1.0);
  }
  if (head == "powerinvlog") {
    const auto p = detail::parse_params(body, {"p"});
    return growth::powerinvlog(detail::required(p, "p", "powerinvlog"));
  }
  if (head == "interp") {
    const auto parts = detail::split_keys(body, {"phi0", "phi1", "rho"});
    for (const char* k : {"phi0", "phi1", "rho"})
      if (!parts.count(k)) throw FormatError(std::string("interp: missing ") + k);
    return interpolate_growth(parse_growth(parts.at("phi0")), parse_growth(parts.at("phi1")),
                              parse_rho(parts.at("rho")));
  }
  throw FormatError("unknown growth family '" + head + "'");
}

/// The shipped library of growth functions.
inline std::vector<GrowthFunction> shipped_growth_functions() {
  std::vector<GrowthFunction> out;
  for (double p : {1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0, 2.0, 3.0}) out.push_back(growth::power(p));
  out.push_back(growth::powerlog(1.0, 1.0));
  out.push_back(growth::powerlog(2.0, 1.0));
  out.push_back(growth::powerinvlog(2.0));
  out.push_back(interpolate_growth(growth::power(2.0), growth::power(4.0), growth::rho_power(0.5)));
  return out;
}

}  // namespace bol
