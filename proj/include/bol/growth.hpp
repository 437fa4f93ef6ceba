#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "bol/error.hpp"
#include "bol/numeric.hpp"

namespace bol {

enum class TypeKind { upper, lower, unclassified };

/// Declared type class: upper_type(q) for 𝒰^q, lower_type(p) for 𝓛_p.
struct TypeClass {
  TypeKind kind = TypeKind::unclassified;
  double exponent = 0.0;

  static TypeClass upper(double q) { return {TypeKind::upper, q}; }
  static TypeClass lower(double p) { return {TypeKind::lower, p}; }
  static TypeClass none() { return {}; }
};

/// A continuous non-decreasing Φ : [0,∞) → [0,∞) with Φ(0) = 0.
///
/// Built either from a forward evaluator (inverse by monotone bisection unless
/// a closed form is supplied) or from an inverse evaluator (forward values by
/// bisection on the inverse). Immutable and cheap to copy.
class GrowthFunction {
 public:
  using Fn = std::function<double(double)>;

  static GrowthFunction from_forward(std::string id, Fn forward, TypeClass cls, Fn closed_inverse = {}) {
    GrowthFunction g;
    g.impl_ = std::make_shared<Impl>(Impl{std::move(id), std::move(forward), std::move(closed_inverse), cls});
    return g;
  }

  static GrowthFunction from_inverse(std::string id, Fn inverse, TypeClass cls) {
    auto inv = std::make_shared<Fn>(std::move(inverse));
    Fn forward = [inv](double t) { return solve_increasing(*inv, t); };
    GrowthFunction g;
    g.impl_ = std::make_shared<Impl>(Impl{std::move(id), std::move(forward), *inv, cls});
    return g;
  }

  double operator()(double t) const {
    if (t < 0.0 || std::isnan(t)) throw DomainError("growth function evaluated at negative argument");
    if (t == 0.0) return 0.0;
    return impl_->forward(t);
  }

  /// Φ⁻¹(s): closed form when available, otherwise bisection.
  double inverse(double s) const {
    if (s < 0.0 || std::isnan(s)) throw DomainError("growth inverse at negative argument");
    if (s == 0.0) return 0.0;
    if (impl_->closed_inverse) return impl_->closed_inverse(s);
    return inverse_by_bisection(s);
  }

  double inverse_by_bisection(double s) const {
    return solve_increasing([this](double t) { return (*this)(t); }, s);
  }

  bool has_closed_inverse() const noexcept { return static_cast<bool>(impl_->closed_inverse); }
  const std::string& id() const noexcept { return impl_->id; }
  TypeClass declared_class() const noexcept { return impl_->cls; }

  /// p_Φ: 1 for upper type, p for lower type p.
  double p_phi() const noexcept { return impl_->cls.kind == TypeKind::lower ? impl_->cls.exponent : 1.0; }

  GrowthFunction with_class(TypeClass cls) const {
    auto impl = std::make_shared<Impl>(*impl_);
    impl->cls = cls;
    GrowthFunction g;
    g.impl_ = std::move(impl);
    return g;
  }

 private:
  struct Impl {
    std::string id;
    Fn forward;
    Fn closed_inverse;
    TypeClass cls;
  };
  std::shared_ptr<const Impl> impl_;
};

/// ρ : (0,∞) → (0,∞), the parameter of the interpolation combination.
class PseudoConcaveFunction {
 public:
  using Fn = std::function<double(double)>;
  PseudoConcaveFunction(std::string id, Fn rho) : id_(std::move(id)), rho_(std::move(rho)) {}
  double operator()(double s) const { return rho_(s); }
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
  Fn rho_;
};

// ---------------------------------------------------------------------------
// Shipped families.

namespace growth {

inline std::string fmt_param(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// t^p; upper type p for p ≥ 1, lower type p for p < 1.
inline GrowthFunction power(double p) {
  if (!(p > 0.0)) throw ParameterError("power growth needs p > 0");
  const TypeClass cls = p >= 1.0 ? TypeClass::upper(p) : TypeClass::lower(p);
  return GrowthFunction::from_forward(
      "power:p=" + fmt_param(p), [p](double t) { return std::pow(t, p); }, cls,
      [p](double s) { return std::pow(s, 1.0 / p); });
}

/// t^p (log(e+t))^a.
inline GrowthFunction powerlog(double p, double a = 1.0) {
  if (!(p > 0.0) || a < 0.0) throw ParameterError("powerlog needs p > 0, a >= 0");
  const TypeClass cls = p >= 1.0 ? TypeClass::upper(p + a) : TypeClass::none();
  return GrowthFunction::from_forward(
      "powerlog:p=" + fmt_param(p) + ",a=" + fmt_param(a),
      [p, a](double t) { return std::pow(t, p) * std::pow(std::log(std::numbers::e + t), a); }, cls);
}

/// t^p / log(e+t); vanishes at 0.
inline GrowthFunction powerinvlog(double p) {
  if (!(p > 1.0)) throw ParameterError("powerinvlog needs p > 1");
  return GrowthFunction::from_forward(
      "powerinvlog:p=" + fmt_param(p), [p](double t) { return std::pow(t, p) / std::log(std::numbers::e + t); },
      TypeClass::upper(p));
}

inline PseudoConcaveFunction rho_power(double theta) {
  return {"power:theta=" + fmt_param(theta), [theta](double s) { return std::pow(s, theta); }};
}

/// t^θ (log(e+t))^α (e+1/t)^β.
inline PseudoConcaveFunction rho_gp(double theta, double alpha, double beta) {
  return {"gp:theta=" + fmt_param(theta) + ",alpha=" + fmt_param(alpha) + ",beta=" + fmt_param(beta),
          [theta, alpha, beta](double t) {
            return std::pow(t, theta) * std::pow(std::log(std::numbers::e + t), alpha) *
                   std::pow(std::numbers::e + 1.0 / t, beta);
          }};
}

}  // namespace growth

// ---------------------------------------------------------------------------
// Calculus.

inline double evaluate(const GrowthFunction& phi, double t) { return phi(t); }
inline double inverse(const GrowthFunction& phi, double s) { return phi.inverse(s); }

/// Empirical constant of a grid-sampled inequality, with a range-extension
/// probe: a true constant does not grow when the sampling range is widened.
struct GridConstant {
  double value = 0.0;     ///< max over the default grid
  double extended = 0.0;  ///< max over the widened grid
  bool certified = false;
};

struct TypeGrid {
  GridSpec s{1e-6, 1e6, 193};
  double t_span = 1e4;  ///< t ∈ [1, t_span] (upper) or [1/t_span, 1] (lower)
  int t_points = 97;
  double extension = 1e4;  ///< multiplicative widening of both ranges for the probe
  double stability = 0.10;
};

namespace detail {

inline double type_sweep(const GrowthFunction& phi, TypeClass kind, double s_lo, double s_hi, int s_n, double t_span,
                         int t_n) {
  const auto ss = log_grid(s_lo, s_hi, s_n);
  const auto ts = kind.kind == TypeKind::upper ? log_grid(1.0, t_span, t_n) : log_grid(1.0 / t_span, 1.0, t_n);
  const double r = kind.exponent;
  double worst = 0.0;
  for (double s : ss) {
    const double fs = phi(s);
    if (!(fs > 0.0)) throw DegenerateFunctionError("growth function vanishes at s > 0");
    for (double t : ts) {
      const double ratio = phi(s * t) / (std::pow(t, r) * fs);
      if (!std::isfinite(ratio)) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, ratio);
    }
  }
  return worst;
}

}  // namespace detail

/// C = max Φ(st) / (t^r Φ(s)) over the sampled (s,t).
inline GridConstant type_constant(const GrowthFunction& phi, TypeClass kind, const TypeGrid& grid = {}) {
  if (kind.kind == TypeKind::unclassified) throw ParameterError("type_constant needs upper(q) or lower(p)");
  GridConstant c;
  c.value = detail::type_sweep(phi, kind, grid.s.lo, grid.s.hi, grid.s.points, grid.t_span, grid.t_points);
  c.extended = detail::type_sweep(phi, kind, grid.s.lo / grid.extension, grid.s.hi * grid.extension, grid.s.points,
                                  grid.t_span * grid.extension, grid.t_points);
  c.certified = std::isfinite(c.extended) && c.extended <= c.value * (1.0 + grid.stability);
  return c;
}

/// Φ′(t) by central differences with relative step h, one Richardson step.
inline double log_derivative_ratio(const GrowthFunction& phi, double t, double rel_step = 1e-6) {
  const double fx = phi(t);
  if (!(fx > 0.0)) throw DegenerateFunctionError("indices: Φ(t) = 0 at t > 0");
  auto central = [&](double h) {
    if (t - h <= 0.0) return (phi(t + h) - fx) / h;
    return (phi(t + h) - phi(t - h)) / (2.0 * h);
  };
  const double h = rel_step * t;
  const double d1 = central(h);
  const double d2 = central(0.5 * h);
  const double d = (4.0 * d2 - d1) / 3.0;
  return t * d / fx;
}

struct Indices {
  double a = 0.0;  ///< inf tΦ′/Φ
  double b = 0.0;  ///< sup tΦ′/Φ
};

inline Indices indices(const GrowthFunction& phi, const GridSpec& grid = {}) {
  const auto ts = log_grid(grid);
  std::vector<double> ratio(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double r = log_derivative_ratio(phi, ts[i]);
    if (!std::isfinite(r)) {
      r = log_derivative_ratio(phi, ts[i] * (1.0 + 1e-3), 1e-5);
      if (!std::isfinite(r)) throw DegenerateFunctionError("indices: non-finite tΦ′/Φ");
    }
    ratio[i] = r;
  }
  const auto [mn, mx] = std::minmax_element(ratio.begin(), ratio.end());
  auto refine = [&](std::size_t i, bool maximize) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(ts.size() - 1, i + 1);
    if (lo == hi) return ratio[i];
    auto g = [&](double x) {
      const double r = log_derivative_ratio(phi, std::exp(x));
      return maximize ? r : -r;
    };
    const auto e = golden_section_max(g, std::log(ts[lo]), std::log(ts[hi]), 1e-10);
    const double v = maximize ? e.value : -e.value;
    return maximize ? std::max(v, ratio[i]) : std::min(v, ratio[i]);
  };
  Indices out;
  out.a = refine(static_cast<std::size_t>(mn - ratio.begin()), false);
  out.b = refine(static_cast<std::size_t>(mx - ratio.begin()), true);
  return out;
}

/// Ψ(s) = sup_{t>0} {ts − Φ(t)} by golden-section search on log t with
/// geometric bracket expansion.
inline double conjugate_value(const GrowthFunction& phi, double s) {
  if (s < 0.0 || std::isnan(s)) throw DomainError("complementary function at negative argument");
  if (s == 0.0) return 0.0;
  auto h = [&](double x) {
    const double t = std::exp(x);
    try {
      return t * s - phi(t);
    } catch (const UnboundedInverseError&) {
      // Φ(t) lies past the overflow bound.
      return -std::numeric_limits<double>::infinity();
    }
  };
  constexpr double x_max = 690.0;  // t ≈ 1e300
  constexpr double x_min = -690.0;
  // ts − Φ(t) is convex for concave Φ, so a finite local maximum can hide an
  // unbounded right tail.
  const double far = h(x_max);
  if (std::isfinite(far) && far > 0.0 && far >= h(x_max - 1.0))
    throw ConjugateInfiniteError("conjugate supremum is infinite");
  double x0 = 0.0, f0 = h(x0);
  double step = 1.0;
  double xr = x0 + step, fr = h(xr);
  double xl = x0 - step, fl = h(xl);
  // Walk uphill until the middle point dominates both neighbours.
  while (!(f0 >= fr && f0 >= fl)) {
    if (fr > f0) {
      xl = x0;
      fl = f0;
      x0 = xr;
      f0 = fr;
      step *= 2.0;
      xr = x0 + step;
      if (xr > x_max) throw ConjugateInfiniteError("conjugate supremum is infinite");
      fr = h(xr);
    } else {
      xr = x0;
      fr = f0;
      x0 = xl;
      f0 = fl;
      step *= 2.0;
      xl = x0 - step;
      if (xl < x_min) return std::max(0.0, f0);
      fl = h(xl);
    }
  }
  const auto e = golden_section_max(h, xl, xr, 1e-14);
  return std::max({0.0, e.value, f0});
}

inline GrowthFunction complementary(const GrowthFunction& phi) {
  return GrowthFunction::from_forward("conj(" + phi.id() + ")",
                                      [phi](double s) { return conjugate_value(phi, s); }, TypeClass::none());
}

inline GridConstant delta2_constant(const GrowthFunction& phi, const GridSpec& grid = {}, double extension = 1e8,
                                    double stability = 0.10) {
  auto sweep = [&](double lo, double hi) {
    double worst = 0.0;
    for (double t : log_grid(lo, hi, grid.points)) {
      const double ft = phi(t);
      if (!(ft > 0.0)) throw DegenerateFunctionError("Δ₂: Φ(t) = 0 at t > 0");
      const double r = phi(2.0 * t) / ft;
      if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, r);
    }
    return worst;
  };
  GridConstant c;
  c.value = sweep(grid.lo, grid.hi);
  c.extended = sweep(grid.lo / extension, grid.hi * extension);
  c.certified = std::isfinite(c.extended) && c.extended <= c.value * (1.0 + stability);
  return c;
}

struct Nabla2Report {
  bool verdict = false;  ///< Δ₂ for both Φ and Ψ
  bool phi_delta2 = false;
  bool psi_delta2 = false;
  GridConstant phi_constant;
  std::optional<GridConstant> psi_constant;
  Indices idx;
  bool index_criterion = false;  ///< a_Φ > 1
  bool disagree = false;
};

inline constexpr double kIndexTolerance = 1e-3;

inline Nabla2Report nabla2_check(const GrowthFunction& phi, const GridSpec& grid = {}) {
  Nabla2Report r;
  try {
    r.phi_constant = delta2_constant(phi, grid);
    r.phi_delta2 = r.phi_constant.certified;
  } catch (const DegenerateFunctionError&) {
    r.phi_delta2 = false;
  }
  try {
    const auto psi = complementary(phi);
    r.psi_constant = delta2_constant(psi, grid);
    r.psi_delta2 = r.psi_constant->certified;
  } catch (const ConjugateInfiniteError&) {
    r.psi_delta2 = false;
  } catch (const DegenerateFunctionError&) {
    r.psi_delta2 = false;
  }
  r.verdict = r.phi_delta2 && r.psi_delta2;
  r.idx = indices(phi, grid);
  r.index_criterion = r.idx.a > 1.0 + kIndexTolerance && std::isfinite(r.idx.b);
  r.disagree = r.verdict != r.index_criterion;
  return r;
}

/// Φ_p(t) = Φ(t^{1/p}) for Φ of lower type p, declared upper type q where q is
/// the (rounded-up) upper index of Φ_p; the type constant must certify.
inline GrowthFunction power_compose(const GrowthFunction& phi, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("power_compose needs p in (0, 1]");
  auto composed = GrowthFunction::from_forward(
      "compose(" + phi.id() + ",p=" + growth::fmt_param(p) + ")",
      [phi, p](double t) { return phi(std::pow(t, 1.0 / p)); }, TypeClass::none(),
      phi.has_closed_inverse() ? GrowthFunction::Fn([phi, p](double s) { return std::pow(phi.inverse(s), p); })
                               : GrowthFunction::Fn{});
  const auto idx = indices(composed);
  const double q = std::max(1.0, idx.b * (1.0 + 1e-6));
  const auto c = type_constant(composed, TypeClass::upper(q));
  if (!c.certified) throw DegenerateFunctionError("Φ_p is not of upper type on the grid");
  return composed.with_class(TypeClass::upper(q));
}

struct InverseClassReport {
  double exponent = 0.0;  ///< 1/p
  GridConstant constant;
};

/// Checks numerically that Φ⁻¹ is of upper type 1/p for Φ of lower type p.
inline InverseClassReport inverse_class_check(const GrowthFunction& phi) {
  const auto cls = phi.declared_class();
  if (cls.kind != TypeKind::lower) throw ParameterError("inverse_class_check needs a lower-type Φ");
  auto inv = GrowthFunction::from_forward("inv(" + phi.id() + ")", [phi](double s) { return phi.inverse(s); },
                                          TypeClass::upper(1.0 / cls.exponent));
  InverseClassReport r;
  r.exponent = 1.0 / cls.exponent;
  r.constant = type_constant(inv, TypeClass::upper(r.exponent));
  return r;
}

/// Φ defined by Φ⁻¹ = Φ₀⁻¹ ρ(Φ₁⁻¹/Φ₀⁻¹).
inline GrowthFunction interpolate_growth(const GrowthFunction& phi0, const GrowthFunction& phi1,
                                         const PseudoConcaveFunction& rho) {
  auto inv = [phi0, phi1, rho](double t) {
    if (t == 0.0) return 0.0;
    const double i0 = phi0.inverse(t);
    if (!(i0 > 0.0)) throw DegenerateFunctionError("interpolate_growth: Φ₀⁻¹(t) = 0 at t > 0");
    return i0 * rho(phi1.inverse(t) / i0);
  };
  const auto c0 = phi0.declared_class(), c1 = phi1.declared_class();
  const TypeClass cls = (c0.kind == TypeKind::upper && c1.kind == TypeKind::upper)
                            ? TypeClass::upper(std::max(c0.exponent, c1.exponent))
                            : TypeClass::none();
  return GrowthFunction::from_inverse("interp:phi0=" + phi0.id() + ",phi1=" + phi1.id() + ",rho=" + rho.id(), inv,
                                      cls);
}

struct PseudoConcaveReport {
  bool ok = true;
  double worst_ratio = 0.0;  ///< max ρ(s) / (max(1,s/t) ρ(t))
  double worst_s = 0.0;
  double worst_t = 0.0;
};

inline PseudoConcaveReport pseudo_concave_check(const PseudoConcaveFunction& rho, const GridSpec& grid = {1e-6, 1e6, 161},
                                                double tol = 1e-12) {
  const auto g = log_grid(grid);
  std::vector<double> vals(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) vals[i] = rho(g[i]);
  PseudoConcaveReport r;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double bound = std::max(1.0, g[i] / g[j]) * vals[j];
      const double ratio = vals[i] / bound;
      if (ratio > r.worst_ratio) {
        r.worst_ratio = ratio;
        r.worst_s = g[i];
        r.worst_t = g[j];
      }
    }
  }
  r.ok = r.worst_ratio <= 1.0 + tol;
  return r;
}

/// Two-sided bracket of Φ₁(t)/Φ₂(t): C = max(max ratio, 1/min ratio).
struct RatioBracket {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double constant = 0.0;
};

inline RatioBracket ratio_bracket(const GrowthFunction& phi1, const GrowthFunction& phi2,
                                  const GridSpec& grid = {1e-6, 1e6, 2048}) {
  RatioBracket b{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (double t : log_grid(grid)) {
    const double r = phi1(t) / phi2(t);
    b.min_ratio = std::min(b.min_ratio, r);
    b.max_ratio = std::max(b.max_ratio, r);
  }
  b.constant = std::max(b.max_ratio, 1.0 / b.min_ratio);
  return b;
}

/// Smallest c ≥ 1 (on the grid) with (1/c)Φ₁(t/c) ≤ Φ₂(t) ≤ cΦ₁(ct).
inline double equivalence_constant(const GrowthFunction& phi1, const GrowthFunction& phi2,
                                   const GridSpec& grid = {1e-6, 1e6, 513}) {
  const auto ts = log_grid(grid);
  auto holds = [&](double c) {
    for (double t : ts) {
      const double v = phi2(t);
      if (phi1(t / c) / c > v * (1.0 + 1e-14) || v > c * phi1(c * t) * (1.0 + 1e-14)) return false;
    }
    return true;
  };
  if (holds(1.0)) return 1.0;
  double hi = 2.0;
  while (!holds(hi)) {
    hi *= 2.0;
    if (hi > 1e12) return std::numeric_limits<double>::infinity();
  }
  double lo = hi / 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Invariant checks of a GrowthFunction on a grid.

struct GrowthInvariantReport {
  bool zero_at_origin = false;
  bool monotone = false;
  bool ratio_monotone = true;  ///< Φ(t)/t non-decreasing (upper) / non-increasing (lower)
  std::optional<GridConstant> type;
  bool ok() const {
    return zero_at_origin && monotone && ratio_monotone && (!type || type->certified);
  }
};

inline GrowthInvariantReport check_invariants(const GrowthFunction& phi, const GridSpec& grid = {1e-8, 1e8, 1025}) {
  GrowthInvariantReport r;
  r.zero_at_origin = phi(0.0) == 0.0;
  const auto ts = log_grid(grid);
  r.monotone = true;
  double prev = 0.0, prev_ratio = 0.0;
  const auto cls = phi.declared_class();
  constexpr double slack = 1e-12;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double v = phi(ts[i]);
    if (v < prev * (1.0 - slack)) r.monotone = false;
    const double ratio = v / ts[i];
    if (i > 0) {
      if (cls.kind == TypeKind::upper && ratio < prev_ratio * (1.0 - 1e-9)) r.ratio_monotone = false;
      if (cls.kind == TypeKind::lower && ratio > prev_ratio * (1.0 + 1e-9)) r.ratio_monotone = false;
    }
    prev = v;
    prev_ratio = ratio;
  }
  if (cls.kind != TypeKind::unclassified) r.type = type_constant(phi, cls);
  return r;
}

}  // namespace bol
