#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include "bol/error.hpp"
#include "bol/jacobi.hpp"
#include "bol/numeric.hpp"
#include "bol/point.hpp"

namespace bol {

/// ν_α = c_α (1-|z|²)^α dν on 𝔹ⁿ, dν the normalized volume measure.
struct WeightedMeasure {
  int n = 1;
  double alpha = 0.0;
  double c_alpha = 1.0;
};

/// 1 / B(n, α+1), the density constant of u = |z|² under ν_α.
inline double radial_normalizer(int n, double alpha) {
  return std::exp(std::lgamma(n + alpha + 1.0) - std::lgamma(static_cast<double>(n)) - std::lgamma(alpha + 1.0));
}

inline WeightedMeasure make_measure(int n, double alpha) {
  if (n < 1 || n > kMaxDim) throw ParameterError("measure dimension must be in [1, 4]");
  if (!(alpha > -1.0)) throw DomainError("measure weight alpha must exceed -1");
  WeightedMeasure m{n, alpha, 0.0};
  m.c_alpha = std::exp(std::lgamma(n + alpha + 1.0) - std::lgamma(n + 1.0) - std::lgamma(alpha + 1.0));
  // 1/c_α = n ∫₀¹ u^{n-1}(1-u)^α du.
  const auto r = gauss_jacobi_unit(n, alpha, 0.0);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], n - 1);
  const double check = n * s / (alpha + 1.0);
  if (std::abs(check * m.c_alpha - 1.0) > 1e-10) throw Error("make_measure: normalization cross-check failed");
  return m;
}

/// ∫|z|^{2k} dν_α for n = 1: k! Γ(α+2) / Γ(k+α+2).
inline double disc_moment(int k, double alpha) {
  return std::exp(std::lgamma(k + 1.0) + std::lgamma(alpha + 2.0) - std::lgamma(k + alpha + 2.0));
}

enum class RuleKind { product, monte_carlo, focused };

inline const char* to_string(RuleKind k) {
  switch (k) {
    case RuleKind::product: return "product";
    case RuleKind::monte_carlo: return "monte_carlo";
    case RuleKind::focused: return "focused";
  }
  return "?";
}

struct QuadratureRule {
  int n = 1;
  double alpha = 0.0;
  std::vector<Point> nodes;
  std::vector<double> weights;
  int exact_degree = -1;  ///< product rules only
  RuleKind kind = RuleKind::product;
  std::string id;

  std::size_t size() const noexcept { return nodes.size(); }
};

struct RuleSettings {
  int degree = 48;
  std::size_t samples = 200000;
  std::uint64_t seed = 1;
  int refine = 0;  ///< each level doubles the degree / quadruples the samples
};

namespace detail {

inline std::vector<double> trapezoid_angles(int m) {
  std::vector<double> t(m);
  for (int j = 0; j < m; ++j) t[j] = 2.0 * std::numbers::pi * j / m;
  return t;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Product rule exact for every z^m z̄^{m'} with |m|+|m'| ≤ degree (n ≤ 2).
inline QuadratureRule product_rule(const WeightedMeasure& mu, int degree) {
  if (degree < 0) throw ParameterError("product rule degree must be >= 0");
  if (mu.n > 2) throw UnsupportedError("product rules are available for n <= 2 only; use monte_carlo");
  QuadratureRule q;
  q.n = mu.n;
  q.alpha = mu.alpha;
  q.kind = RuleKind::product;
  q.exact_degree = degree;
  q.id = "product:n=" + std::to_string(mu.n) + ",alpha=" + detail::fmt(mu.alpha) + ",degree=" + std::to_string(degree);
  const int nr = degree / 4 + 1;
  const int m = degree + 1;
  const auto ang = detail::trapezoid_angles(m);
  if (mu.n == 1) {
    const auto ru = gauss_jacobi_unit(nr, mu.alpha, 0.0);
    for (int i = 0; i < nr; ++i) {
      const double r = std::sqrt(ru.x[i]);
      for (int j = 0; j < m; ++j) {
        Point z(1);
        z[0] = std::polar(r, ang[j]);
        q.nodes.push_back(z);
        q.weights.push_back(ru.w[i] / m);
      }
    }
    return q;
  }
  const auto ru = gauss_jacobi_unit(nr, mu.alpha, 1.0);
  const auto rs = gauss_legendre(nr, 0.0, 1.0);
  for (int i = 0; i < nr; ++i)
    for (int k = 0; k < nr; ++k) {
      const double r1 = std::sqrt(ru.x[i] * rs.x[k]);
      const double r2 = std::sqrt(ru.x[i] * (1.0 - rs.x[k]));
      const double w = ru.w[i] * rs.w[k] / (static_cast<double>(m) * m);
      for (int j1 = 0; j1 < m; ++j1)
        for (int j2 = 0; j2 < m; ++j2) {
          Point z(2);
          z[0] = std::polar(r1, ang[j1]);
          z[1] = std::polar(r2, ang[j2]);
          q.nodes.push_back(z);
          q.weights.push_back(w);
        }
    }
  return q;
}

/// Seeded low-discrepancy rule: Halton points (Cranley–Patterson shifted)
/// uniform in volume, self-normalized weights ∝ (1-|z|²)^α.
inline QuadratureRule monte_carlo_rule(const WeightedMeasure& mu, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw ParameterError("monte carlo rule needs sample_count >= 1");
  const int n = mu.n;
  const int dims = 2 * n;
  SplitMix64 rng(seed);
  std::vector<double> shift(dims);
  for (auto& s : shift) s = rng.uniform();
  QuadratureRule q;
  q.n = n;
  q.alpha = mu.alpha;
  q.kind = RuleKind::monte_carlo;
  q.id = "monte_carlo:n=" + std::to_string(n) + ",alpha=" + detail::fmt(mu.alpha) +
         ",samples=" + std::to_string(samples) + ",seed=" + std::to_string(seed);
  q.nodes.reserve(samples);
  q.weights.reserve(samples);
  std::vector<double> coord(dims), cuts;
  for (std::size_t i = 0; i < samples; ++i) {
    for (int d = 0; d < dims; ++d) {
      const double h = radical_inverse(i + 1, kHaltonPrimes[d]) + shift[d];
      coord[d] = h - std::floor(h);
    }
    // u = |z|² with density n u^{n-1}; sphere moduli from simplex spacings.
    const double u = std::pow(coord[0], 1.0 / n);
    cuts.assign(coord.begin() + 1, coord.begin() + n);
    std::sort(cuts.begin(), cuts.end());
    Point z(n);
    double prev = 0.0;
    for (int j = 0; j < n; ++j) {
      const double next = j + 1 < n ? cuts[j] : 1.0;
      const double s = next - prev;
      prev = next;
      z[j] = std::polar(std::sqrt(u * s), 2.0 * std::numbers::pi * coord[n + j]);
    }
    if (!(z.norm2() < 1.0)) continue;
    q.nodes.push_back(z);
    q.weights.push_back(std::pow(1.0 - u, mu.alpha));
  }
  double total = pairwise_sum(q.weights);
  for (auto& w : q.weights) w /= total;
  return q;
}

/// Panel endpoints 0 = x₀ < ... < 1 refined geometrically toward 1 until the
/// last panel is no wider than `finest`.
inline std::vector<double> graded_to_one(double finest) {
  std::vector<double> e{0.0};
  double gap = 0.5;
  while (gap > finest) {
    e.push_back(1.0 - gap);
    gap *= 0.5;
  }
  e.push_back(1.0 - gap);
  e.push_back(1.0);
  return e;
}

/// Symmetric angle panels on [-π, π] refined geometrically toward 0.
inline std::vector<double> graded_angles(double finest) {
  std::vector<double> pos;
  double t = std::numbers::pi;
  while (t > finest) {
    pos.push_back(t);
    t *= 0.5;
  }
  pos.push_back(t);
  std::vector<double> e;
  for (double v : pos) e.push_back(-v);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) e.push_back(*it);
  return e;
}

namespace detail {

/// Nodes/weights on [0,1] for ∫ g(u) u^b (1-u)^α du · norm, graded toward 1.
/// The last panel uses Gauss–Jacobi so the endpoint singularity is exact.
inline Rule1D graded_radial(double finest, int q, double alpha, double b, double norm) {
  const auto e = graded_to_one(finest);
  Rule1D r;
  for (std::size_t p = 0; p + 1 < e.size(); ++p) {
    const double lo = e[p], hi = e[p + 1];
    const double h = hi - lo;
    if (p + 2 == e.size()) {
      // u = lo + h v; (1-u)^α = h^α (1-v)^α.
      const auto gj = gauss_jacobi_unit(q, alpha, 0.0);
      const double scale = std::pow(h, alpha + 1.0) / (alpha + 1.0) * norm;
      for (int i = 0; i < q; ++i) {
        const double u = lo + h * gj.x[i];
        r.x.push_back(u);
        r.w.push_back(gj.w[i] * scale * std::pow(u, b));
      }
    } else {
      const auto gl = gauss_legendre(q, lo, hi);
      for (int i = 0; i < q; ++i) {
        const double u = gl.x[i];
        r.x.push_back(u);
        r.w.push_back(gl.w[i] * norm * std::pow(u, b) * std::pow(1.0 - u, alpha));
      }
    }
  }
  return r;
}

inline Rule1D panels(const std::vector<double>& e, int q, double scale) {
  Rule1D r;
  for (std::size_t p = 0; p + 1 < e.size(); ++p) {
    const auto gl = gauss_legendre(q, e[p], e[p + 1]);
    for (int i = 0; i < q; ++i) {
      r.x.push_back(gl.x[i]);
      r.w.push_back(gl.w[i] * scale);
    }
  }
  return r;
}

}  // namespace detail

/// Rule concentrated near the boundary point a/|a|: panels graded toward
/// |z| = 1 and toward the direction of `center`, in a unitary frame mapping
/// the centre to the positive real axis. For integrands with kernel factors
/// (1-⟨z,a⟩)^{-s} with |a| near 1.
inline QuadratureRule focused_rule(const WeightedMeasure& mu, const Point& center, int refine = 0) {
  if (mu.n > 2) throw UnsupportedError("focused rules are available for n <= 2 only");
  if (center.dim() != mu.n) throw ParameterError("focused rule: centre dimension mismatch");
  require_in_ball(center, "focused rule centre");
  const double ra = center.norm();
  const double delta = std::max(1.0 - ra, 1e-6) / std::pow(2.0, refine);
  const double norm = radial_normalizer(mu.n, mu.alpha);
  QuadratureRule q;
  q.n = mu.n;
  q.alpha = mu.alpha;
  q.kind = RuleKind::focused;
  {
    std::string c;
    for (int j = 0; j < mu.n; ++j)
      c += (j ? ";" : "") + detail::fmt(center[j].real()) + (center[j].imag() < 0 ? "" : "+") +
           detail::fmt(center[j].imag()) + "i";
    q.id = "focused:n=" + std::to_string(mu.n) + ",alpha=" + detail::fmt(mu.alpha) + ",center=" + c +
           ",refine=" + std::to_string(refine);
  }
  // Unit vector of the centre (e₁ when the centre is 0).
  Point e(mu.n);
  if (ra > 0.0)
    e = center * cplx(1.0 / ra);
  else
    e[0] = 1.0;

  if (mu.n == 1) {
    const int qp = 8 + 2 * refine;
    const auto ru = detail::graded_radial(delta / 8.0, qp, mu.alpha, 0.0, norm);
    const auto rt = detail::panels(graded_angles(delta / 4.0), qp, 1.0 / (2.0 * std::numbers::pi));
    for (std::size_t i = 0; i < ru.x.size(); ++i) {
      const double r = std::sqrt(ru.x[i]);
      for (std::size_t j = 0; j < rt.x.size(); ++j) {
        Point z(1);
        z[0] = e[0] * std::polar(r, rt.x[j]);
        q.nodes.push_back(z);
        q.weights.push_back(ru.w[i] * rt.w[j]);
      }
    }
    return q;
  }
  // n = 2: z = U w with U e₁ = e; w₁ = √(us) e^{iθ₁}, w₂ = √(u(1-s)) e^{iθ₂}.
  const int qp = 5 + refine;
  const auto ru = detail::graded_radial(delta / 8.0, qp, mu.alpha, 1.0, norm);
  const auto rs = detail::graded_radial(delta / 8.0, qp, 0.0, 0.0, 1.0);
  const auto r1 = detail::panels(graded_angles(delta / 4.0), qp, 1.0 / (2.0 * std::numbers::pi));
  const int m2 = 12 + 4 * refine;
  const auto ang2 = detail::trapezoid_angles(m2);
  const cplx u00 = e[0], u10 = e[1], u01 = -std::conj(e[1]), u11 = std::conj(e[0]);
  for (std::size_t i = 0; i < ru.x.size(); ++i)
    for (std::size_t k = 0; k < rs.x.size(); ++k) {
      const double a1 = std::sqrt(ru.x[i] * rs.x[k]);
      const double a2 = std::sqrt(ru.x[i] * (1.0 - rs.x[k]));
      for (std::size_t j = 0; j < r1.x.size(); ++j) {
        const cplx w1 = std::polar(a1, r1.x[j]);
        const double wt = ru.w[i] * rs.w[k] * r1.w[j] / m2;
        for (int l = 0; l < m2; ++l) {
          const cplx w2 = std::polar(a2, ang2[l]);
          Point z(2);
          z[0] = u00 * w1 + u01 * w2;
          z[1] = u10 * w1 + u11 * w2;
          q.nodes.push_back(z);
          q.weights.push_back(wt);
        }
      }
    }
  return q;
}

/// Product rule for n ≤ 2, Monte Carlo otherwise.
inline QuadratureRule build_rule(const WeightedMeasure& mu, const RuleSettings& s = {}) {
  if (mu.n <= 2) return product_rule(mu, s.degree << s.refine);
  return monte_carlo_rule(mu, s.samples << (2 * s.refine), s.seed);
}

/// Σ w_i F(z_i), evaluated in parallel, summed pairwise in node order.
template <class F>
auto integrate(const QuadratureRule& rule, F&& f) {
  using R = std::decay_t<decltype(f(rule.nodes[0]))>;
  std::vector<R> terms(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) { terms[i] = f(rule.nodes[i]); });
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if constexpr (std::is_same_v<R, cplx>) {
      if (!std::isfinite(terms[i].real()) || !std::isfinite(terms[i].imag()))
        throw NonFiniteError(i, "integrand is not finite");
    } else {
      if (!std::isfinite(terms[i])) throw NonFiniteError(i, "integrand is not finite");
    }
    terms[i] *= rule.weights[i];
  }
  return pairwise_sum(terms);
}

/// Σ w_i v_i for precomputed node values.
inline double integrate_values(const QuadratureRule& rule, const std::vector<double>& values) {
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw NonFiniteError(i, "integrand is not finite");
    terms[i] = rule.weights[i] * values[i];
  }
  return pairwise_sum(terms);
}

/// Self-normalized standard error of ∫F for a Monte Carlo rule.
template <class F>
double standard_error(const QuadratureRule& rule, F&& f) {
  const double mean = integrate(rule, f);
  std::vector<double> terms(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) {
    const double d = f(rule.nodes[i]) - mean;
    terms[i] = rule.weights[i] * rule.weights[i] * d * d;
  });
  return std::sqrt(pairwise_sum(terms));
}

}  // namespace bol
