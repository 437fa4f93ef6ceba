#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "bol/error.hpp"
#include "bol/holo.hpp"
#include "bol/jacobi.hpp"
#include "bol/measure.hpp"
#include "bol/mobius.hpp"
#include "bol/norms.hpp"
#include "bol/series.hpp"

namespace bol {

inline constexpr int kSymbolTruncation = 48;

/// Symbol g of T_g, with g(0) = 0 and the cached radial derivative Rg.
class CesaroSymbol {
 public:
  explicit CesaroSymbol(HoloFunction g) : g_(std::move(g)), rg_(radial_derivative(g_)) {
    if (eval(g_, zero_point(g_.dim())) != cplx(0.0)) throw SymbolInvariantError("Cesaro symbol needs g(0) = 0");
  }
  const HoloFunction& g() const noexcept { return g_; }
  const HoloFunction& rg() const noexcept { return rg_; }
  int dim() const noexcept { return g_.dim(); }

  /// Rg as a series: exact for series symbols, truncated otherwise.
  Series rg_series() const {
    if (auto* s = rg_.as_series()) return *s;
    return to_series(rg_, kSymbolTruncation);
  }

 private:
  HoloFunction g_;
  HoloFunction rg_;
};

/// T_g f = Σ_{m,k} a_m b_k z^{m+k} / (|m|+|k|) for f = Σ a_m z^m, Rg = Σ b_k z^k.
template <class T>
BasicSeries<T> cesaro_coefficients(const BasicSeries<T>& rg, const BasicSeries<T>& f) {
  if (rg.dim() != f.dim()) throw ParameterError("cesaro: dimension mismatch");
  if (!is_zero(rg.coefficient(MultiIndex{}))) throw SymbolInvariantError("Rg has a constant term");
  std::map<MultiIndex, T> acc;
  for (const auto& [m, a] : f.terms())
    for (const auto& [k, b] : rg.terms()) acc[m + k] += a * b;
  BasicSeries<T> out(f.dim());
  for (const auto& [j, c] : acc) out.add_term(j, c / T(total_degree(j)));
  return out;
}

inline Series cesaro_apply_exact(const CesaroSymbol& g, const Series& f) {
  return cesaro_coefficients(g.rg_series(), f);
}

/// T_g f as a function: exact coefficients for series inputs with a series
/// symbol, a Cesàro integral node otherwise.
inline HoloFunction cesaro_apply(const CesaroSymbol& g, const HoloFunction& f) {
  if (auto* fs = f.as_series())
    if (auto* rs = g.rg().as_series()) return cesaro_coefficients(*rs, *fs);
  return HoloFunction::cesaro(g.rg(), f);
}

/// ∫₀¹ f(tz) Rg(tz) dt/t by an npts-point Gauss–Legendre rule on (0, 1).
inline cplx cesaro_apply_numeric(const CesaroSymbol& g, const HoloFunction& f, const Point& z, int npts = 32) {
  require_in_ball(z, "cesaro_apply_numeric");
  const auto t = gauss_legendre(npts, 0.0, 1.0);
  cplx s = 0.0;
  for (int i = 0; i < npts; ++i) {
    const Point tz = z * cplx(t.x[i]);
    s += t.w[i] * eval_unchecked(f, tz) * eval_unchecked(g.rg(), tz) / t.x[i];
  }
  return s;
}

struct IdentityCheck {
  double coefficient_deviation = 0.0;  ///< max |R(T_g f)_j - (f·Rg)_j| / max(1, |(f·Rg)_j|)
  double sample_deviation = 0.0;       ///< relative, at the sample points
};

/// R(T_g f) = f·Rg at coefficient level and at sample points.
inline IdentityCheck radial_derivative_identity_check(const CesaroSymbol& g, const Series& f,
                                                      const std::vector<Point>& samples) {
  const Series rg = g.rg_series();
  const Series lhs = cesaro_coefficients(rg, f).radial_derivative();
  const Series rhs = f.multiply(rg);
  IdentityCheck out;
  auto dev = [&](const MultiIndex& m) {
    const cplx b = rhs.coefficient(m);
    out.coefficient_deviation =
        std::max(out.coefficient_deviation, std::abs(lhs.coefficient(m) - b) / std::max(1.0, std::abs(b)));
  };
  for (const auto& [m, c] : lhs.terms()) dev(m);
  for (const auto& [m, c] : rhs.terms()) dev(m);
  for (const auto& z : samples) {
    const cplx a = eval(lhs, z), b = eval(f, z) * eval(rg, z);
    out.sample_deviation = std::max(out.sample_deviation, std::abs(a - b) / std::max(1.0, std::abs(b)));
  }
  return out;
}

/// Exact version over Gaussian rationals: true iff R(T_g f) == f·Rg termwise.
inline bool radial_derivative_identity_exact(const ExactSeries& rg, const ExactSeries& f) {
  return cesaro_coefficients(rg, f).radial_derivative() == f.multiply(rg);
}

// ---------------------------------------------------------------------------
// Bloch-type quantities of the symbol.

struct BlochReport {
  double M = 0.0;
  double argmax_radius = 0.0;
  Point argmax;
  std::vector<std::pair<double, double>> boundary_profile;  ///< (r, sup_ζ (1-r²)|Rg(rζ)|)
  bool unbounded = false;
};

struct BlochSettings {
  int angles_1d = 512;
  int directions = 2048;
  int uniform_radii = 64;
  double profile_cap = 1e6;
};

inline std::vector<double> bloch_radii(int uniform) {
  std::vector<double> r;
  for (int i = 0; i < uniform; ++i) r.push_back(static_cast<double>(i) / uniform);
  for (int k = 8; k <= 64; ++k) r.push_back(1.0 - std::pow(10.0, -k / 8.0));
  return r;
}

namespace detail {

inline double bloch_value(const HoloFunction& rg, const Point& z) {
  return (1.0 - z.norm2()) * std::abs(eval_unchecked(rg, z));
}

/// Direction on the sphere from (s, θ₁, θ₂, ...) for n = 2; angle for n = 1.
inline Point direction_n2(double s, double t1, double t2) {
  return Point{std::polar(std::sqrt(s), t1), std::polar(std::sqrt(1.0 - s), t2)};
}

}  // namespace detail

/// M = sup (1-|z|²)|Rg(z)| by a radius × direction sweep followed by
/// coordinatewise golden-section refinement around the best cell.
inline BlochReport bloch_seminorm(const CesaroSymbol& g, const BlochSettings& set = {}) {
  const int n = g.dim();
  if (n > 2) throw UnsupportedError("bloch_seminorm supports n <= 2");
  const auto& rg = g.rg();
  const auto radii = bloch_radii(set.uniform_radii);
  const auto dirs = sphere_directions(n, n == 1 ? set.angles_1d : set.directions);
  BlochReport rep;
  rep.argmax = zero_point(n);
  std::vector<double> prof(radii.size());
  std::vector<std::size_t> best_dir(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) {
    double m = 0.0;
    std::size_t arg = 0;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      const double v = detail::bloch_value(rg, dirs[d] * cplx(radii[i]));
      if (v > m) {
        m = v;
        arg = d;
      }
    }
    prof[i] = m;
    best_dir[i] = arg;
  });
  std::size_t best = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    rep.boundary_profile.emplace_back(radii[i], prof[i]);
    if (prof[i] > prof[best]) best = i;
  }
  if (!(prof[best] > 0.0)) return rep;

  // Parametrize the best direction and refine r and the angles in turn.
  const Point d0 = dirs[best_dir[best]];
  double r = radii[best];
  double rlo = best == 0 ? 0.0 : radii[best - 1];
  double rhi = best + 1 < radii.size() ? radii[best + 1] : 1.0 - 1e-12;
  double th1 = std::arg(d0[0]);
  double s = n == 2 ? std::norm(d0[0]) : 1.0;
  double th2 = n == 2 ? std::arg(d0[1]) : 0.0;
  auto point = [&](double rr, double ss, double a1, double a2) {
    if (n == 1) return Point{std::polar(rr, a1)};
    return detail::direction_n2(std::clamp(ss, 0.0, 1.0), a1, a2) * cplx(rr);
  };
  auto value = [&](double rr, double ss, double a1, double a2) { return detail::bloch_value(rg, point(rr, ss, a1, a2)); };
  const double dth = n == 1 ? 2.0 * std::numbers::pi / set.angles_1d : 0.5;
  double m = prof[best];
  for (int round = 0; round < (n == 1 ? 3 : 6); ++round) {
    auto er = golden_section_max([&](double x) { return value(x, s, th1, th2); }, rlo, rhi, 1e-14);
    if (er.value > m) {
      m = er.value;
      r = er.x;
    }
    auto e1 = golden_section_max([&](double x) { return value(r, s, x, th2); }, th1 - dth, th1 + dth, 1e-14);
    if (e1.value > m) {
      m = e1.value;
      th1 = e1.x;
    }
    if (n == 2) {
      auto es = golden_section_max([&](double x) { return value(r, x, th1, th2); }, std::max(0.0, s - 0.25),
                                   std::min(1.0, s + 0.25), 1e-14);
      if (es.value > m) {
        m = es.value;
        s = es.x;
      }
      auto e2 = golden_section_max([&](double x) { return value(r, s, th1, x); }, th2 - dth, th2 + dth, 1e-14);
      if (e2.value > m) {
        m = e2.value;
        th2 = e2.x;
      }
    }
  }
  rep.M = m;
  rep.argmax_radius = r;
  rep.argmax = point(r, s, th1, th2);

  // Unbounded at numeric scale: the profile exceeds the cap or keeps growing
  // by more than a factor 100 over the last four decades toward the boundary.
  const double last = prof.back();
  double at_1e4 = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (radii[i] <= 1.0 - 1e-4 + 1e-15) at_1e4 = prof[i];
  rep.unbounded = last > set.profile_cap || (at_1e4 > 0.0 && last > 100.0 * at_1e4);
  return rep;
}

struct LittleBlochReport {
  std::vector<std::pair<double, double>> profile;
  bool little_bloch = false;
};

/// sup over directions of (1-r²)|Rg(rζ)| at each radius; verdict from the
/// final radius.
inline LittleBlochReport little_bloch_profile(const CesaroSymbol& g, const std::vector<double>& radii,
                                              double eps = 1e-3, int directions = 512) {
  if (radii.empty()) throw ParameterError("little_bloch_profile needs radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw ParameterError("radii must increase");
  const auto dirs = sphere_directions(g.dim(), directions);
  LittleBlochReport rep;
  for (double r : radii) {
    double m = 0.0;
    for (const auto& d : dirs) m = std::max(m, detail::bloch_value(g.rg(), d * cplx(r)));
    rep.profile.emplace_back(r, m);
  }
  rep.little_bloch = rep.profile.back().second < eps;
  return rep;
}

// ---------------------------------------------------------------------------

/// P_β F(z) = ∫ F(ξ)(1-⟨z,ξ⟩)^{-(n+1+β)} dν_β(ξ), with F sampled once at the nodes.
inline std::function<cplx(const Point&)> bergman_project(const std::function<cplx(const Point&)>& F, double beta,
                                                         const QuadratureRule& rule) {
  if (!(beta > -1.0)) throw DomainError("Bergman projection needs beta > -1");
  if (std::abs(rule.alpha - beta) > 0.0) throw ParameterError("rule weight must equal beta");
  auto values = std::make_shared<std::vector<cplx>>(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    (*values)[i] = F(rule.nodes[i]);
    if (!std::isfinite((*values)[i].real()) || !std::isfinite((*values)[i].imag()))
      throw NonFiniteError(i, "projection integrand is not finite");
  }
  auto r = std::make_shared<QuadratureRule>(rule);
  const double s = rule.n + 1.0 + beta;
  return [values, r, s](const Point& z) {
    require_in_ball(z, "bergman projection");
    std::vector<cplx> terms(r->size());
    for (std::size_t i = 0; i < r->size(); ++i)
      terms[i] = r->weights[i] * (*values)[i] * std::pow(1.0 - inner(z, r->nodes[i]), -s);
    return pairwise_sum(terms);
  };
}

// ---------------------------------------------------------------------------
// Operator-norm comparisons for T_g.

struct CesaroLowerBound {
  double value = 0.0;          ///< max ‖T_g f‖ / ‖f‖
  std::size_t argmax = 0;
  std::vector<double> ratios;  ///< per family member
};

inline CesaroLowerBound cesaro_norm_lower_bound(const CesaroSymbol& g, const GrowthFunction& phi,
                                                const WeightedMeasure& mu, const std::vector<HoloFunction>& family,
                                                const RuleSettings& s = {}) {
  CesaroLowerBound out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& f = family[i];
    const auto rule = rule_for(f, mu, s);
    const double nf = luxemburg_norm(f, phi, rule).lambda_star;
    if (!(nf > 0.0)) throw PreconditionError("Cesaro lower bound needs nonzero family members");
    const double nt = luxemburg_norm(cesaro_apply(g, f), phi, rule).lambda_star;
    out.ratios.push_back(nt / nf);
    if (nt / nf > out.value) {
      out.value = nt / nf;
      out.argmax = i;
    }
  }
  return out;
}

struct CesaroUpperCheck {
  double M = 0.0;
  std::vector<double> modulars;  ///< ∫Φ((1-|z|²)|R T_g f| / (M‖f‖)) dν_α per member
  double worst = 0.0;
  bool pass = true;
};

inline CesaroUpperCheck cesaro_upper_bound_check(const CesaroSymbol& g, const GrowthFunction& phi,
                                                 const WeightedMeasure& mu, const std::vector<HoloFunction>& family,
                                                 double M, const RuleSettings& s = {}, double tol = 1e-6) {
  CesaroUpperCheck out;
  out.M = M;
  if (!(M > 0.0)) return out;  // vacuous: T_0 = 0
  for (const auto& f : family) {
    const auto rule = rule_for(f, mu, s);
    const double nf = luxemburg_norm(f, phi, rule).lambda_star;
    if (!(nf > 0.0)) throw PreconditionError("Cesaro upper check needs nonzero family members");
    // R T_g f = f·Rg
    const auto v = node_values(rule, [&](const Point& z) {
      return (1.0 - z.norm2()) * std::abs(eval_unchecked(f, z) * eval_unchecked(g.rg(), z)) / (M * nf);
    });
    const double m = modular_of_values(rule, v, phi);
    out.modulars.push_back(m);
    out.worst = std::max(out.worst, m);
  }
  out.pass = out.worst <= 1.0 + tol;
  return out;
}

}  // namespace bol
