#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace bol {

enum class Verdict { pass, inconclusive, fail };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::fail: return "fail";
  }
  return "?";
}

inline Verdict worst(Verdict a, Verdict b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

/// Exit status for a verdict: 0 pass, 1 fail, 2 inconclusive.
inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return 0;
    case Verdict::fail: return 1;
    case Verdict::inconclusive: return 2;
  }
  return 1;
}

struct CaseRecord {
  std::string id;
  std::map<std::string, double> quantities;
  std::map<std::string, double> ratios;
  bool ok = true;
};

struct VerificationReport {
  std::string suite;
  std::map<std::string, std::string> inputs;
  std::vector<CaseRecord> cases;
  std::map<std::string, double> constants;
  Verdict verdict = Verdict::pass;
  std::uint64_t seed = 0;
  std::vector<std::string> rules;
  std::vector<std::string> notes;

  void add_rule(const std::string& id) {
    for (const auto& r : rules)
      if (r == id) return;
    rules.push_back(id);
  }
};

inline constexpr const char* kReportSchema = "bol-report/1";

/// Non-finite numbers become null.
inline nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline nlohmann::json number_map(const std::map<std::string, double>& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : m) j[k] = number(v);
  return j;
}

inline nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases)
    cases.push_back({{"id", c.id}, {"quantities", number_map(c.quantities)}, {"ratios", number_map(c.ratios)},
                     {"ok", c.ok}});
  return {{"schema", kReportSchema}, {"suite", r.suite},     {"inputs", r.inputs},
          {"cases", cases},          {"constants", number_map(r.constants)},
          {"verdict", to_string(r.verdict)}, {"seed", r.seed}, {"rules", r.rules}, {"notes", r.notes}};
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Per-case ratios as CSV: case,ratio,value.
inline std::string to_csv(const VerificationReport& r) {
  std::string out = "case,ratio,value\n";
  char buf[64];
  for (const auto& c : r.cases)
    for (const auto& [k, v] : c.ratios) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += "\"" + c.id + "\"," + k + "," + buf + "\n";
    }
  return out;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace bol
