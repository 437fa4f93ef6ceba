#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "bol/growth.hpp"
#include "bol/holo.hpp"
#include "bol/measure.hpp"
#include "bol/norms.hpp"
#include "bol/operators.hpp"
#include "bol/report.hpp"

namespace bol {

struct HarnessSettings {
  RuleSettings rules;
  double drift_pass = 0.10;
  double drift_fail = 0.50;
  double chain_tol = 1e-10;
  double upper_tol = 1e-6;
  double scaling_tol = 1e-6;
  double test_bracket = 50.0;
  double c_min = 0.51;       ///< lower/M threshold of the boundedness suite
  bool extra_refinement = false;  ///< compare three rule levels instead of two
};

struct FamilyMember {
  std::string label;
  HoloFunction f;
};

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// Unit direction used for test-function centres: e₁ for n = 1, (1, i)/√2 for n = 2.
inline Point centre_direction(int n) {
  Point e(n);
  if (n == 1) {
    e[0] = 1.0;
    return e;
  }
  const double c = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) e[j] = std::polar(c, 0.5 * std::numbers::pi * j);
  return e;
}

/// Seeded random series of total degree ≤ max_degree without constant term.
inline Series random_series(int n, int max_degree, SplitMix64& rng, int max_terms = 8) {
  Series s(n);
  const int terms = rng.uniform_int(1, max_terms);
  for (int t = 0; t < terms; ++t) {
    const int d = rng.uniform_int(1, max_degree);
    MultiIndex m{};
    for (int i = 0; i < d; ++i) ++m[rng.uniform_int(0, n - 1)];
    s.add_term(m, cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));
  }
  if (s.empty()) s.add_term(MultiIndex{1}, 1.0);
  return s;
}

/// z^k (k ≤ 8), ten random series of degree ≤ 6, and test functions f_a with
/// |a| ∈ {0.5, 0.9}.
inline std::vector<FamilyMember> default_family(int n, const GrowthFunction& phi, double alpha, std::uint64_t seed) {
  std::vector<FamilyMember> fam;
  for (int k = 1; k <= 8; ++k) {
    MultiIndex m{};
    m[0] = (k + 1) / 2;
    if (n > 1) m[1] = k / 2;
    else m[0] = k;
    fam.push_back({"z^" + std::to_string(k), Series::monomial(n, m)});
  }
  SplitMix64 rng(seed);
  for (int i = 0; i < 10; ++i) fam.push_back({"random" + std::to_string(i), random_series(n, 6, rng)});
  const double k = default_test_exponent(phi);
  for (double r : {0.5, 0.9})
    fam.push_back({"f_a|a|=" + fmt_g(r), test_function(centre_direction(n) * cplx(r), k, phi, alpha)});
  return fam;
}

inline std::vector<HoloFunction> functions_of(const std::vector<FamilyMember>& fam) {
  std::vector<HoloFunction> out;
  for (const auto& m : fam) out.push_back(m.f);
  return out;
}

inline std::vector<int> refinement_levels(const HarnessSettings& s) {
  return s.extra_refinement ? std::vector<int>{0, 1, 2} : std::vector<int>{0, 1};
}

/// Largest relative drift between successive levels of each named constant.
inline double max_drift(const std::vector<std::map<std::string, double>>& per_level) {
  double d = 0.0;
  for (std::size_t l = 1; l < per_level.size(); ++l)
    for (const auto& [k, v] : per_level[l]) d = std::max(d, relative_drift(per_level[l - 1].at(k), v));
  return d;
}

inline Verdict drift_verdict(double drift, const HarnessSettings& s) {
  if (!std::isfinite(drift)) return Verdict::fail;
  if (drift <= s.drift_pass) return Verdict::pass;
  if (drift <= s.drift_fail) return Verdict::inconclusive;
  return Verdict::fail;
}

inline bool all_finite(const std::map<std::string, double>& m) {
  for (const auto& [k, v] : m)
    if (!std::isfinite(v)) return false;
  return true;
}

inline RuleSettings at_level(RuleSettings r, int level) {
  r.refine += level;
  return r;
}

inline void base_inputs(VerificationReport& rep, const GrowthFunction& phi, const WeightedMeasure& mu,
                        const HarnessSettings& s) {
  rep.inputs["phi"] = phi.id();
  rep.inputs["n"] = std::to_string(mu.n);
  rep.inputs["alpha"] = fmt_g(mu.alpha);
  rep.inputs["degree"] = std::to_string(s.rules.degree);
  rep.seed = s.rules.seed;
}

// ---------------------------------------------------------------------------

/// The four derivative modulars are comparable: empirical two-sided constants,
/// stable under refinement, with the pointwise derivative chain at every node.
inline VerificationReport verify_derivative_equivalence(const GrowthFunction& phi, const WeightedMeasure& mu,
                                                        const std::vector<FamilyMember>& family,
                                                        const HarnessSettings& s) {
  VerificationReport rep;
  rep.suite = "derivative_equivalence";
  base_inputs(rep, phi, mu, s);
  std::vector<std::map<std::string, double>> levels;
  double chain = 0.0;
  bool modular_chain = true;
  for (int level : refinement_levels(s)) {
    std::map<std::string, double> c{{"C_plus", 0.0}, {"C_minus", 0.0}, {"norm_C_plus", 0.0}, {"norm_C_minus", 0.0}};
    for (const auto& mem : family) {
      const auto rule = rule_for(mem.f, mu, at_level(s.rules, level));
      rep.add_rule(rule.id);
      const auto d = derivative_modulars(mem.f, phi, rule);
      chain = std::max(chain, d.chain_violation);
      const double mf = d.modulars[0].value, mi = d.modulars[1].value, mg = d.modulars[2].value,
                   mr = d.modulars[3].value;
      const double nf = d.norms[0].lambda_star, ni = d.norms[1].lambda_star, nr = d.norms[3].lambda_star;
      if (!(mf > 0.0)) throw PreconditionError("derivative_equivalence needs nonconstant functions");
      if (mr > mg * (1.0 + s.chain_tol) || mg > mi * (1.0 + s.chain_tol)) modular_chain = false;
      c["C_plus"] = std::max(c["C_plus"], mi / mf);
      c["C_minus"] = std::max(c["C_minus"], mf / mr);
      c["norm_C_plus"] = std::max(c["norm_C_plus"], ni / nf);
      c["norm_C_minus"] = std::max(c["norm_C_minus"], nf / nr);
      if (level == 0) {
        CaseRecord cr;
        cr.id = mem.label;
        cr.quantities = {{"m_function", mf}, {"m_invariant", mi}, {"m_gradient", mg}, {"m_radial", mr},
                         {"norm_function", nf}, {"norm_invariant", ni}, {"norm_gradient", d.norms[2].lambda_star},
                         {"norm_radial", nr}};
        cr.ratios = {{"invariant/function", mi / mf}, {"function/radial", mf / mr},
                     {"norm_invariant/norm_function", ni / nf}, {"norm_function/norm_radial", nf / nr}};
        cr.ok = std::isfinite(mi / mf) && std::isfinite(mf / mr) && d.chain_violation <= s.chain_tol;
        rep.cases.push_back(std::move(cr));
      }
    }
    levels.push_back(std::move(c));
  }
  rep.constants = levels.front();
  for (const auto& [k, v] : levels.back()) rep.constants[k + "_refined"] = v;
  const double drift = max_drift(levels);
  rep.constants["drift"] = drift;
  rep.constants["chain_violation"] = chain;
  Verdict v = drift_verdict(drift, s);
  for (const auto& l : levels)
    if (!all_finite(l)) v = Verdict::fail;
  if (chain > s.chain_tol || !modular_chain) v = Verdict::fail;
  rep.verdict = v;
  return rep;
}

/// Pointwise growth of |f| and (1-|z|²)|∇f| against Φ⁻¹((1-|z|²)^{-(n+1+α)})‖f‖.
inline VerificationReport verify_pointwise_estimates(const GrowthFunction& phi, const WeightedMeasure& mu,
                                                     const std::vector<FamilyMember>& family,
                                                     const HarnessSettings& s) {
  VerificationReport rep;
  rep.suite = "pointwise_estimates";
  base_inputs(rep, phi, mu, s);
  const auto fs = functions_of(family);
  std::vector<std::map<std::string, double>> levels;
  for (int level : refinement_levels(s)) {
    const auto rs = at_level(s.rules, level);
    const auto c0 = pointwise_bound_constant(fs, phi, mu, rs);
    const auto c1 = derivative_pointwise_constant(fs, phi, mu, rs);
    levels.push_back({{"C", c0.value}, {"C1", c1.value}});
    if (level == 0) {
      for (std::size_t i = 0; i < family.size(); ++i) {
        CaseRecord cr;
        cr.id = family[i].label;
        cr.ratios = {{"pointwise", c0.members[i]}, {"derivative", c1.members[i]}};
        cr.ok = std::isfinite(c0.members[i]) && std::isfinite(c1.members[i]);
        rep.cases.push_back(std::move(cr));
      }
    }
  }
  rep.constants = levels.front();
  for (const auto& [k, v] : levels.back()) rep.constants[k + "_refined"] = v;
  const double drift = max_drift(levels);
  rep.constants["drift"] = drift;
  rep.verdict = drift_verdict(drift, s);
  for (const auto& l : levels)
    if (!all_finite(l)) rep.verdict = Verdict::fail;
  return rep;
}

/// ‖f_a‖ stays bounded as |a| → 1.
inline VerificationReport verify_test_functions(const GrowthFunction& phi, const WeightedMeasure& mu, double k,
                                                const HarnessSettings& s,
                                                const std::vector<double>& radii = {0.0, 0.5, 0.9, 0.99, 0.999}) {
  VerificationReport rep;
  rep.suite = "test_functions";
  base_inputs(rep, phi, mu, s);
  rep.inputs["k"] = fmt_g(k);
  std::vector<std::map<std::string, double>> levels;
  std::vector<double> norms;
  for (int level : refinement_levels(s)) {
    std::map<std::string, double> c;
    for (double r : radii) {
      const auto f = test_function(centre_direction(mu.n) * cplx(r), k, phi, mu.alpha);
      const auto rule = rule_for(f, mu, at_level(s.rules, level));
      rep.add_rule(rule.id);
      const double nv = luxemburg_norm(f, phi, rule).lambda_star;
      c["norm|a|=" + fmt_g(r)] = nv;
      if (level == 0) norms.push_back(nv);
    }
    levels.push_back(std::move(c));
  }
  const auto [mn, mx] = std::minmax_element(norms.begin(), norms.end());
  const double spread = *mx / *mn;
  // A growth trend: the last three norms each increase by more than 10%.
  bool trend = false;
  if (norms.size() >= 3) {
    const std::size_t l = norms.size() - 1;
    trend = norms[l] > 1.1 * norms[l - 1] && norms[l - 1] > 1.1 * norms[l - 2];
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    CaseRecord cr;
    cr.id = "|a|=" + fmt_g(radii[i]);
    cr.quantities = {{"norm", norms[i]}};
    cr.ratios = {{"norm/min", norms[i] / *mn}};
    rep.cases.push_back(std::move(cr));
  }
  rep.constants = levels.front();
  rep.constants["max_over_min"] = spread;
  const double drift = max_drift(levels);
  rep.constants["drift"] = drift;
  rep.verdict = drift_verdict(drift, s);
  if (!(spread <= s.test_bracket) || trend || !all_finite(levels.front())) rep.verdict = Verdict::fail;
  if (trend) rep.notes.push_back("norms grow toward the boundary");
  return rep;
}

struct SymbolMember {
  std::string label;
  HoloFunction g;
};

/// ‖T_g‖ ≍ M: the proof's modular upper check for every family member and a
/// family lower bound with lower/M ≥ c_min; lower/M is invariant under g ↦ 2g.
inline VerificationReport verify_cesaro_boundedness(const std::vector<SymbolMember>& symbols,
                                                    const GrowthFunction& phi, const WeightedMeasure& mu,
                                                    const std::vector<FamilyMember>& family,
                                                    const HarnessSettings& s) {
  VerificationReport rep;
  rep.suite = "cesaro_boundedness";
  base_inputs(rep, phi, mu, s);
  rep.inputs["c_min"] = fmt_g(s.c_min);
  const auto fs = functions_of(family);
  Verdict v = Verdict::pass;
  double min_ratio = std::numeric_limits<double>::infinity();
  std::vector<std::map<std::string, double>> levels(refinement_levels(s).size());
  for (const auto& sym : symbols) {
    const CesaroSymbol g(sym.g);
    const auto bloch = bloch_seminorm(g);
    if (!(bloch.M > 0.0)) throw PreconditionError("cesaro_boundedness needs symbols with M > 0");
    if (bloch.unbounded) throw PreconditionError("cesaro_boundedness needs Bloch symbols");
    const auto upper = cesaro_upper_bound_check(g, phi, mu, fs, bloch.M, s.rules, s.upper_tol);
    double lower0 = 0.0;
    std::size_t argmax = 0;
    for (int level : refinement_levels(s)) {
      const auto lb = cesaro_norm_lower_bound(g, phi, mu, fs, at_level(s.rules, level));
      levels[level]["lower/M[" + sym.label + "]"] = lb.value / bloch.M;
      if (level == 0) {
        lower0 = lb.value;
        argmax = lb.argmax;
      }
    }
    // g ↦ 2g
    const CesaroSymbol g2(cplx(2.0) * sym.g);
    const double M2 = bloch_seminorm(g2).M;
    const double lower2 = cesaro_norm_lower_bound(g2, phi, mu, fs, s.rules).value;
    const double scaling_dev = std::abs(lower2 / M2 - lower0 / bloch.M);
    CaseRecord cr;
    cr.id = "g=" + sym.label;
    cr.quantities = {{"M", bloch.M}, {"argmax_radius", bloch.argmax_radius}, {"lower", lower0},
                     {"upper_modular_max", upper.worst}, {"lower_2g", lower2}, {"M_2g", M2}};
    cr.ratios = {{"lower/M", lower0 / bloch.M}, {"lower/M_2g", lower2 / M2}, {"scaling_deviation", scaling_dev}};
    cr.ok = upper.pass && lower0 / bloch.M >= s.c_min && scaling_dev <= s.scaling_tol;
    rep.notes.push_back("g=" + sym.label + ": lower bound attained by " + family[argmax].label);
    min_ratio = std::min(min_ratio, lower0 / bloch.M);
    if (!cr.ok) v = Verdict::fail;
    rep.cases.push_back(std::move(cr));
  }
  rep.constants = levels.front();
  rep.constants["c_min"] = s.c_min;
  rep.constants["min_lower_over_M"] = min_ratio;
  const double drift = max_drift(levels);
  rep.constants["drift"] = drift;
  rep.verdict = worst(v, drift_verdict(drift, s));
  return rep;
}

/// ‖T_g f_{a_j}‖ decays along |a_j| → 1 for little-Bloch g.
inline VerificationReport verify_cesaro_compactness(const SymbolMember& symbol, const GrowthFunction& phi,
                                                    const WeightedMeasure& mu, const std::vector<double>& radii,
                                                    const HarnessSettings& s, double k = 0.0) {
  if (radii.size() < 2) throw ParameterError("compactness needs at least two radii");
  VerificationReport rep;
  rep.suite = "cesaro_compactness";
  base_inputs(rep, phi, mu, s);
  rep.inputs["g"] = symbol.label;
  if (k <= 0.0) k = default_test_exponent(phi);
  rep.inputs["k"] = fmt_g(k);
  const CesaroSymbol g(symbol.g);
  std::vector<std::map<std::string, double>> levels;
  std::vector<double> norms;
  for (int level : refinement_levels(s)) {
    std::map<std::string, double> c;
    for (double r : radii) {
      const Point a = centre_direction(mu.n) * cplx(r);
      const auto f = test_function(a, k, phi, mu.alpha);
      const auto rule = rule_for(f, mu, at_level(s.rules, level));
      rep.add_rule(rule.id);
      const double nt = luxemburg_norm(cesaro_apply(g, f), phi, rule).lambda_star;
      c["norm|a|=" + fmt_g(r)] = nt;
      if (level == 0) {
        norms.push_back(nt);
        // (1-|a|²)|Rg(a)||f_a(a)| / Φ⁻¹((1-|a|²)^{-(n+1+α)}) against ‖T_g f_a‖
        const double lhs = (1.0 - a.norm2()) * std::abs(eval(g.rg(), a)) * std::abs(eval(f, a)) /
                           pointwise_envelope(phi, mu, a);
        CaseRecord cr;
        cr.id = "|a|=" + fmt_g(r);
        cr.quantities = {{"norm_Tg_fa", nt}, {"proof_lhs", lhs}};
        cr.ratios = {{"proof_lhs/norm", nt > 0.0 ? lhs / nt : 0.0}};
        rep.cases.push_back(std::move(cr));
      }
    }
    levels.push_back(std::move(c));
  }
  const auto mx = std::max_element(norms.begin(), norms.end());
  const std::size_t j0 = static_cast<std::size_t>(mx - norms.begin());
  bool decreasing = j0 + 1 < norms.size();
  for (std::size_t j = j0 + 1; j < norms.size(); ++j) decreasing = decreasing && norms[j] < norms[j - 1];
  const double final_over_max = *mx > 0.0 ? norms.back() / *mx : 0.0;
  rep.constants = levels.front();
  rep.constants["final_over_max"] = final_over_max;
  rep.constants["peak_index"] = static_cast<double>(j0);
  const double drift = max_drift(levels);
  rep.constants["drift"] = drift;
  double chain_max = 0.0;
  for (const auto& c : rep.cases) chain_max = std::max(chain_max, c.ratios.at("proof_lhs/norm"));
  rep.constants["proof_chain_constant"] = chain_max;
  if (*mx == 0.0) {
    rep.verdict = Verdict::pass;  // g = 0
    rep.notes.push_back("all norms vanish");
    return rep;
  }
  rep.verdict = drift_verdict(drift, s);
  if (!decreasing || !(final_over_max < 0.1)) rep.verdict = Verdict::fail;
  return rep;
}

/// interpolate_growth(t^{p0}, t^{p1}, s^θ) ≍ t^{p_θ}, 1/p_θ = (1-θ)/p₀ + θ/p₁.
inline VerificationReport verify_interpolation_power(double p0, double p1, double theta, const WeightedMeasure& mu,
                                                     const HarnessSettings& s, double max_constant = 1.01) {
  if (!(p0 >= 1.0 && p1 >= p0 && theta > 0.0 && theta < 1.0))
    throw ParameterError("interpolation needs 1 <= p0 <= p1 and theta in (0, 1)");
  VerificationReport rep;
  rep.suite = "interpolation_power";
  rep.inputs = {{"p0", fmt_g(p0)}, {"p1", fmt_g(p1)}, {"theta", fmt_g(theta)}, {"alpha", fmt_g(mu.alpha)},
                {"n", std::to_string(mu.n)}};
  rep.seed = s.rules.seed;
  const double ptheta = 1.0 / ((1.0 - theta) / p0 + theta / p1);
  const auto phi = interpolate_growth(growth::power(p0), growth::power(p1), growth::rho_power(theta));
  const auto target = growth::power(ptheta);
  const auto br = ratio_bracket(phi, target);
  rep.constants = {{"p_theta", ptheta}, {"bracket_constant", br.constant}, {"min_ratio", br.min_ratio},
                   {"max_ratio", br.max_ratio}};
  Verdict v = br.constant <= max_constant ? Verdict::pass : Verdict::fail;

  std::vector<FamilyMember> fam;
  fam.push_back({"z", Series::coordinate(mu.n, 0)});
  fam.push_back({"1+z^2", Series::constant(mu.n, 1.0) + Series::monomial(mu.n, MultiIndex{2})});
  fam.push_back({"f_a|a|=0.5", test_function(centre_direction(mu.n) * cplx(0.5), 2.0, target, mu.alpha)});
  for (const auto& m : fam) {
    const auto rule = rule_for(m.f, mu, s.rules);
    rep.add_rule(rule.id);
    const auto vals = abs_values(m.f, rule);
    const double a = luxemburg_from_values(rule, vals, phi).lambda_star;
    const double b = luxemburg_from_values(rule, vals, target).lambda_star;
    CaseRecord cr;
    cr.id = m.label;
    cr.quantities = {{"norm_phi", a}, {"norm_power", b}};
    cr.ratios = {{"norm_phi/norm_power", a / b}};
    cr.ok = a / b <= br.constant * (1.0 + 1e-9) && b / a <= br.constant * (1.0 + 1e-9);
    if (!cr.ok) v = Verdict::fail;
    rep.cases.push_back(std::move(cr));
  }

  // Non-power parameter: ρ(t) = t^θ log(e+t).
  const auto rho = growth::rho_gp(theta, 1.0, 0.0);
  const auto pc = pseudo_concave_check(rho);
  const auto phi_gp = interpolate_growth(growth::power(p0), growth::power(p1), rho);
  const auto inv = check_invariants(phi_gp, {1e-6, 1e6, 257});
  CaseRecord gp;
  gp.id = "rho=" + rho.id();
  gp.quantities = {{"pseudo_concave_worst", pc.worst_ratio},
                   {"type_constant", inv.type ? inv.type->value : std::numeric_limits<double>::quiet_NaN()}};
  const auto rule = build_rule(mu, s.rules);
  const double nz = luxemburg_norm(Series::coordinate(mu.n, 0), phi_gp, rule).lambda_star;
  gp.quantities["norm_z"] = nz;
  gp.ok = pc.ok && inv.ok() && std::isfinite(nz) && nz > 0.0;
  if (!gp.ok) v = Verdict::fail;
  rep.cases.push_back(std::move(gp));
  rep.verdict = v;
  return rep;
}

/// ∫|f|(1-|z|²)^{(1/p-1)(n+1+α)} dν_α ≤ C (∫|f|^p dν_α)^{1/p}.
inline VerificationReport verify_small_type(double p, const WeightedMeasure& mu,
                                            const std::vector<FamilyMember>& family, const HarnessSettings& s) {
  VerificationReport rep;
  rep.suite = "small_type";
  rep.inputs = {{"p", fmt_g(p)}, {"alpha", fmt_g(mu.alpha)}, {"n", std::to_string(mu.n)}};
  rep.seed = s.rules.seed;
  const auto fs = functions_of(family);
  std::vector<std::map<std::string, double>> levels;
  for (int level : refinement_levels(s)) {
    const auto c = small_type_estimate_check(fs, p, mu, at_level(s.rules, level));
    levels.push_back({{"C", c.value}});
    if (level == 0)
      for (std::size_t i = 0; i < family.size(); ++i) {
        CaseRecord cr;
        cr.id = family[i].label;
        cr.ratios = {{"ratio", c.members[i]}};
        cr.ok = std::isfinite(c.members[i]);
        rep.cases.push_back(std::move(cr));
      }
  }
  rep.constants = levels.front();
  rep.constants["C_refined"] = levels.back().at("C");
  const double drift = max_drift(levels);
  rep.constants["drift"] = drift;
  rep.verdict = drift_verdict(drift, s);
  if (!all_finite(levels.front())) rep.verdict = Verdict::fail;
  return rep;
}

}  // namespace bol
