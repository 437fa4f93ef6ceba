#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bol/error.hpp"
#include "bol/growth_id.hpp"
#include "bol/holo.hpp"
#include "bol/series.hpp"

namespace bol {

// Function-spec documents (JSON):
//   {"kind": "series", "n": 2, "terms": [[[2, 1], 1.0, 0.0], [[0, 1], 1.0]]}
//   {"kind": "kernel", "a": [0.5, [0.1, 0.2]], "s": 2, "c": 1}
//   {"kind": "sum", "terms": [<spec>, ...]}
//   {"kind": "product", "factors": [<spec>, <spec>]}
//   {"kind": "test_function", "a": [0.9], "k": 2, "phi": "power:p=2", "alpha": 0}
// Complex numbers are either a number or a [re, im] pair.

namespace detail {

inline cplx complex_of(const nlohmann::json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw FormatError(std::string(what) + ": expected a number or [re, im]");
}

inline Point point_of(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(kMaxDim))
    throw FormatError(std::string(what) + ": expected 1 to 4 coordinates");
  Point p(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p[static_cast<int>(i)] = complex_of(j[i], what);
  return p;
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("function spec: missing '") + key + "'");
  return j.at(key);
}

}  // namespace detail

inline Series parse_series(const nlohmann::json& j) {
  const auto& nj = detail::field(j, "n");
  if (!nj.is_number_integer()) throw FormatError("series: 'n' must be an integer");
  const int n = nj.get<int>();
  if (n < 1 || n > kMaxDim) throw FormatError("series: n must be in [1, 4]");
  Series s(n);
  const auto& terms = detail::field(j, "terms");
  if (!terms.is_array()) throw FormatError("series: 'terms' must be an array");
  for (const auto& t : terms) {
    if (!t.is_array() || t.size() < 2 || t.size() > 3 || !t[0].is_array())
      throw FormatError("series term: expected [[m...], re] or [[m...], re, im]");
    if (t[0].size() != static_cast<std::size_t>(n)) throw FormatError("series term: multi-index length must equal n");
    MultiIndex m{};
    for (int i = 0; i < n; ++i) {
      if (!t[0][i].is_number_integer() || t[0][i].get<int>() < 0)
        throw FormatError("series term: exponents must be nonnegative integers");
      m[i] = t[0][i].get<int>();
    }
    if (!t[1].is_number() || (t.size() == 3 && !t[2].is_number())) throw FormatError("series term: bad coefficient");
    s.add_term(m, cplx(t[1].get<double>(), t.size() == 3 ? t[2].get<double>() : 0.0));
  }
  return s;
}

inline HoloFunction parse_function(const nlohmann::json& j) {
  const auto& kj = detail::field(j, "kind");
  if (!kj.is_string()) throw FormatError("function spec: 'kind' must be a string");
  const std::string kind = kj.get<std::string>();
  try {
    if (kind == "series") return parse_series(j);
    if (kind == "kernel") {
      const Point a = detail::point_of(detail::field(j, "a"), "kernel centre");
      const double s = detail::field(j, "s").get<double>();
      const cplx c = j.contains("c") ? detail::complex_of(j.at("c"), "kernel scalar") : cplx(1.0);
      return HoloFunction::kernel(a, s, c);
    }
    if (kind == "sum") {
      std::vector<HoloFunction> terms;
      for (const auto& t : detail::field(j, "terms")) terms.push_back(parse_function(t));
      if (terms.empty()) throw FormatError("sum: no terms");
      HoloFunction acc = terms.front();
      for (std::size_t i = 1; i < terms.size(); ++i) acc = acc + terms[i];
      return acc;
    }
    if (kind == "product") {
      const auto& fs = detail::field(j, "factors");
      if (!fs.is_array() || fs.size() != 2) throw FormatError("product: exactly two factors");
      return parse_function(fs[0]) * parse_function(fs[1]);
    }
    if (kind == "test_function") {
      const Point a = detail::point_of(detail::field(j, "a"), "test function centre");
      const auto phi = parse_growth(detail::field(j, "phi").get<std::string>());
      const double alpha = j.contains("alpha") ? j.at("alpha").get<double>() : 0.0;
      const double k = j.contains("k") ? j.at("k").get<double>() : default_test_exponent(phi);
      return test_function(a, k, phi, alpha);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("function spec: ") + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(std::string("function spec: ") + e.what());
  } catch (const DomainError& e) {
    throw FormatError(std::string("function spec: ") + e.what());
  }
  throw FormatError("function spec: unknown kind '" + kind + "'");
}

inline nlohmann::json series_to_json(const Series& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : s.terms()) {
    nlohmann::json idx = nlohmann::json::array();
    for (int i = 0; i < s.dim(); ++i) idx.push_back(m[i]);
    terms.push_back({idx, c.real(), c.imag()});
  }
  return {{"kind", "series"}, {"n", s.dim()}, {"terms", terms}};
}

}  // namespace bol
