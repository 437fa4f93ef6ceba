#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "bol/error.hpp"
#include "bol/growth.hpp"
#include "bol/holo.hpp"
#include "bol/measure.hpp"
#include "bol/numeric.hpp"

namespace bol {

enum class IntegrandKind { function, invariant_gradient, weighted_gradient, weighted_radial };

inline const char* to_string(IntegrandKind k) {
  switch (k) {
    case IntegrandKind::function: return "function";
    case IntegrandKind::invariant_gradient: return "invariant_gradient";
    case IntegrandKind::weighted_gradient: return "weighted_gradient";
    case IntegrandKind::weighted_radial: return "weighted_radial";
  }
  return "?";
}

struct ModularResult {
  double value = 0.0;
  std::string rule_id;
  IntegrandKind kind = IntegrandKind::function;
};

struct LuxNorm {
  double lambda_star = 0.0;
  double residual = 0.0;  ///< |modular(f/λ*) - 1|
  int iterations = 0;
};

/// Quadrature rule suited to f: focused on the outermost kernel centre when f
/// contains kernel factors (n ≤ 2), the default rule otherwise.
inline QuadratureRule rule_for(const HoloFunction& f, const WeightedMeasure& mu, const RuleSettings& s = {}) {
  const auto centers = kernel_centers(f);
  if (!centers.empty() && mu.n <= 2) {
    const Point* best = &centers.front();
    for (const auto& c : centers)
      if (c.norm2() > best->norm2()) best = &c;
    return focused_rule(mu, *best, s.refine);
  }
  return build_rule(mu, s);
}

/// F evaluated at every node (parallel, slot-per-node).
template <class F>
std::vector<double> node_values(const QuadratureRule& rule, F&& f) {
  std::vector<double> v(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) { v[i] = f(rule.nodes[i]); });
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) throw NonFiniteError(i, "integrand is not finite");
  return v;
}

/// Σ w_i Φ(v_i / λ).
inline double modular_of_values(const QuadratureRule& rule, const std::vector<double>& values, const GrowthFunction& phi,
                                double lambda = 1.0) {
  std::vector<double> terms(values.size());
  parallel_for(values.size(), [&](std::size_t i) { terms[i] = rule.weights[i] * phi(values[i] / lambda); });
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (!std::isfinite(terms[i])) throw NonFiniteError(i, "modular term is not finite");
  return pairwise_sum(terms);
}

template <class F>
ModularResult modular(F&& f, const GrowthFunction& phi, const QuadratureRule& rule,
                      IntegrandKind kind = IntegrandKind::function) {
  const auto v = node_values(rule, f);
  return {modular_of_values(rule, v, phi), rule.id, kind};
}

inline constexpr int kLuxMaxIterations = 200;
inline constexpr double kLuxRelTol = 1e-14;

/// inf{λ > 0 : Σ w_i Φ(v_i/λ) ≤ 1} by bracketing from max v_i and bisection.
/// Returns the feasible end of the final bracket.
inline LuxNorm luxemburg_from_values(const QuadratureRule& rule, const std::vector<double>& values,
                                     const GrowthFunction& phi) {
  const double vmax = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  if (!(vmax > 0.0)) return {};
  LuxNorm out;
  auto m = [&](double lambda) {
    ++out.iterations;
    return modular_of_values(rule, values, phi, lambda);
  };
  double lo, hi;
  if (m(vmax) > 1.0) {
    lo = vmax;
    hi = 2.0 * vmax;
    while (m(hi) > 1.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > kOverflowBound || out.iterations > kLuxMaxIterations)
        throw DivergentNormError("modular stays above 1 inside the overflow bracket");
    }
  } else {
    hi = vmax;
    lo = 0.5 * vmax;
    while (!(m(lo) > 1.0)) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300 || out.iterations > kLuxMaxIterations) return {0.0, 0.0, out.iterations};
    }
  }
  while (hi - lo > kLuxRelTol * hi && out.iterations < kLuxMaxIterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (m(mid) > 1.0 ? lo : hi) = mid;
  }
  out.lambda_star = hi;
  out.residual = std::abs(modular_of_values(rule, values, phi, hi) - 1.0);
  return out;
}

inline std::vector<double> abs_values(const HoloFunction& f, const QuadratureRule& rule) {
  return node_values(rule, [&](const Point& z) { return std::abs(eval_unchecked(f, z)); });
}

inline LuxNorm luxemburg_norm(const HoloFunction& f, const GrowthFunction& phi, const QuadratureRule& rule) {
  return luxemburg_from_values(rule, abs_values(f, rule), phi);
}

inline LuxNorm luxemburg_norm(const HoloFunction& f, const GrowthFunction& phi, const WeightedMeasure& mu,
                              const RuleSettings& s = {}) {
  return luxemburg_norm(f, phi, rule_for(f, mu, s));
}

/// The four integrands |f - f(0)|, |∇̃f|, (1-|z|²)|∇f|, (1-|z|²)|Rf| at the nodes.
struct DerivativeValues {
  std::array<std::vector<double>, 4> values;
  double chain_violation = 0.0;
};

inline DerivativeValues derivative_values(const HoloFunction& f, const QuadratureRule& rule) {
  const cplx f0 = eval(f, zero_point(f.dim()));
  std::vector<DerivativeSample> ds(rule.size());
  std::vector<double> fv(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) {
    ds[i] = derivative_sample(f, rule.nodes[i]);
    fv[i] = std::abs(eval_unchecked(f, rule.nodes[i]) - f0);
  });
  DerivativeValues out;
  out.values[0] = std::move(fv);
  for (auto k : {1, 2, 3}) out.values[k].resize(rule.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out.values[1][i] = ds[i].invariant;
    out.values[2][i] = ds[i].gradient;
    out.values[3][i] = ds[i].radial;
    out.chain_violation = std::max({out.chain_violation, relative_excess(ds[i].radial, ds[i].gradient),
                                    relative_excess(ds[i].gradient, ds[i].invariant)});
    for (int k = 0; k < 4; ++k)
      if (!std::isfinite(out.values[k][i])) throw NonFiniteError(i, "derivative integrand is not finite");
  }
  return out;
}

struct DerivativeModulars {
  std::array<ModularResult, 4> modulars;  ///< function, invariant, gradient, radial
  std::array<LuxNorm, 4> norms;
  double chain_violation = 0.0;
};

inline DerivativeModulars derivative_modulars(const HoloFunction& f, const GrowthFunction& phi,
                                              const QuadratureRule& rule) {
  const auto dv = derivative_values(f, rule);
  DerivativeModulars out;
  constexpr IntegrandKind kinds[4] = {IntegrandKind::function, IntegrandKind::invariant_gradient,
                                      IntegrandKind::weighted_gradient, IntegrandKind::weighted_radial};
  for (int k = 0; k < 4; ++k) {
    out.modulars[k] = {modular_of_values(rule, dv.values[k], phi), rule.id, kinds[k]};
    out.norms[k] = luxemburg_from_values(rule, dv.values[k], phi);
  }
  out.chain_violation = dv.chain_violation;
  return out;
}

inline DerivativeModulars derivative_modulars(const HoloFunction& f, const GrowthFunction& phi,
                                              const WeightedMeasure& mu, const RuleSettings& s = {}) {
  return derivative_modulars(f, phi, rule_for(f, mu, s));
}

// ---------------------------------------------------------------------------
// Pointwise estimates on a sample grid of radii × directions.

/// Directions on the unit sphere: equispaced angles (n = 1) or Halton points
/// (n ≥ 2), plus the given extra directions.
inline std::vector<Point> sphere_directions(int n, int count, const std::vector<Point>& extra = {}) {
  std::vector<Point> dirs;
  for (const auto& e : extra)
    if (e.norm() > 0.0) dirs.push_back(e * cplx(1.0 / e.norm()));
  if (n == 1) {
    for (int j = 0; j < count; ++j) dirs.push_back(Point{std::polar(1.0, 2.0 * std::numbers::pi * j / count)});
    return dirs;
  }
  for (int j = 0; j < n; ++j) {
    Point e(n);
    e[j] = 1.0;
    dirs.push_back(e);
  }
  std::vector<double> cuts;
  for (int i = 0; i < count; ++i) {
    cuts.clear();
    for (int d = 0; d < n - 1; ++d) cuts.push_back(radical_inverse(i + 1, kHaltonPrimes[d]));
    std::sort(cuts.begin(), cuts.end());
    Point z(n);
    double prev = 0.0;
    for (int j = 0; j < n; ++j) {
      const double next = j + 1 < n ? cuts[j] : 1.0;
      z[j] = std::polar(std::sqrt(next - prev), 2.0 * std::numbers::pi * radical_inverse(i + 1, kHaltonPrimes[n - 1 + j]));
      prev = next;
    }
    dirs.push_back(z);
  }
  return dirs;
}

inline std::vector<double> sample_radii(int level) {
  std::vector<double> r{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.995, 0.999};
  for (int l = 0; l < level; ++l) {
    std::vector<double> finer;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      finer.push_back(r[i]);
      finer.push_back(0.5 * (r[i] + r[i + 1]));
    }
    finer.push_back(r.back());
    r = std::move(finer);
  }
  return r;
}

inline std::vector<Point> sample_points(int n, int level, const std::vector<Point>& extra_dirs = {}) {
  const int count = (n == 1 ? 64 : 128) << level;
  const auto dirs = sphere_directions(n, count, extra_dirs);
  std::vector<Point> pts;
  for (double r : sample_radii(level)) {
    if (r == 0.0) {
      pts.push_back(zero_point(n));
      continue;
    }
    for (const auto& d : dirs) pts.push_back(d * cplx(r));
  }
  return pts;
}

/// Empirical constant over a family, with the per-member values.
struct FamilyConstant {
  double value = 0.0;
  std::vector<double> members;
};

/// Φ⁻¹((1-|z|²)^{-(n+1+α)})
inline double pointwise_envelope(const GrowthFunction& phi, const WeightedMeasure& mu, const Point& z) {
  return phi.inverse(std::pow(1.0 - z.norm2(), -(mu.n + 1.0 + mu.alpha)));
}

namespace detail {

template <class Numerator>
FamilyConstant pointwise_sweep(const std::vector<HoloFunction>& family, const GrowthFunction& phi,
                               const WeightedMeasure& mu, const RuleSettings& s, Numerator&& num) {
  FamilyConstant c;
  for (const auto& f : family) {
    const auto nrm = luxemburg_norm(f, phi, mu, s);
    if (!(nrm.lambda_star > 0.0)) throw PreconditionError("pointwise constant needs functions of positive norm");
    const auto pts = sample_points(mu.n, s.refine, kernel_centers(f));
    std::vector<double> ratio(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
      ratio[i] = num(f, pts[i]) / (pointwise_envelope(phi, mu, pts[i]) * nrm.lambda_star);
    });
    const double m = *std::max_element(ratio.begin(), ratio.end());
    c.members.push_back(m);
    c.value = std::max(c.value, m);
  }
  return c;
}

}  // namespace detail

/// max |f(z)| / (Φ⁻¹((1-|z|²)^{-(n+1+α)}) ‖f‖) over the family and sample grid.
inline FamilyConstant pointwise_bound_constant(const std::vector<HoloFunction>& family, const GrowthFunction& phi,
                                               const WeightedMeasure& mu, const RuleSettings& s = {}) {
  return detail::pointwise_sweep(family, phi, mu, s,
                                 [](const HoloFunction& f, const Point& z) { return std::abs(eval_unchecked(f, z)); });
}

/// max (1-|z|²)|∇f(z)| / (Φ⁻¹((1-|z|²)^{-(n+1+α)}) ‖f‖).
inline FamilyConstant derivative_pointwise_constant(const std::vector<HoloFunction>& family, const GrowthFunction& phi,
                                                    const WeightedMeasure& mu, const RuleSettings& s = {}) {
  return detail::pointwise_sweep(family, phi, mu, s, [](const HoloFunction& f, const Point& z) {
    return (1.0 - z.norm2()) * gradient_unchecked(f, z).norm();
  });
}

/// max ∫|f|(1-|z|²)^{(1/p-1)(n+1+α)} dν_α / (∫|f|^p dν_α)^{1/p}.
inline FamilyConstant small_type_estimate_check(const std::vector<HoloFunction>& family, double p,
                                                const WeightedMeasure& mu, const RuleSettings& s = {}) {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("small type estimate needs p in (0, 1]");
  const double e = (1.0 / p - 1.0) * (mu.n + 1.0 + mu.alpha);
  FamilyConstant c;
  for (const auto& f : family) {
    const auto rule = rule_for(f, mu, s);
    const auto v = abs_values(f, rule);
    std::vector<double> lhs(v.size()), rhs(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      lhs[i] = v[i] * std::pow(1.0 - rule.nodes[i].norm2(), e);
      rhs[i] = std::pow(v[i], p);
    }
    const double den = std::pow(integrate_values(rule, rhs), 1.0 / p);
    if (!(den > 0.0)) throw PreconditionError("small type estimate needs nonzero functions");
    const double m = integrate_values(rule, lhs) / den;
    c.members.push_back(m);
    c.value = std::max(c.value, m);
  }
  return c;
}

}  // namespace bol
