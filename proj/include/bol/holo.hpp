#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <type_traits>
#include <string>
#include <variant>
#include <vector>

#include "bol/error.hpp"
#include "bol/growth.hpp"
#include "bol/jacobi.hpp"
#include "bol/mobius.hpp"
#include "bol/point.hpp"
#include "bol/series.hpp"

namespace bol {

class HoloFunction;

struct SeriesNode {
  Series series;
};

/// c (1 - ⟨z,a⟩)^{-s}
struct KernelNode {
  Point a;
  double s;
  cplx c;
};

struct SumNode {
  std::vector<HoloFunction> terms;
};

struct ProductNode {
  std::vector<HoloFunction> factors;  // exactly two
};

/// T_g f(z) = ∫₀¹ f(tz) Rg(tz) dt/t, with Rg(0) = 0.
struct CesaroNode {
  std::vector<HoloFunction> parts;  // {Rg, f}
};

/// A holomorphic function on 𝔹ⁿ given by an expression tree. Immutable; copies
/// share structure.
class HoloFunction {
 public:
  using Node = std::variant<SeriesNode, KernelNode, SumNode, ProductNode, CesaroNode>;

  HoloFunction() : HoloFunction(Series(1)) {}
  HoloFunction(Series s) : n_(s.dim()), node_(std::make_shared<Node>(SeriesNode{std::move(s)})) {}

  static HoloFunction kernel(const Point& a, double s, cplx c = 1.0) {
    require_in_ball(a, "kernel centre");
    if (!(s > 0.0)) throw ParameterError("kernel exponent must be positive");
    return HoloFunction(a.dim(), KernelNode{a, s, c});
  }
  static HoloFunction sum(std::vector<HoloFunction> terms) {
    if (terms.empty()) throw ParameterError("empty sum");
    const int n = terms.front().dim();
    for (const auto& t : terms)
      if (t.dim() != n) throw ParameterError("sum: dimension mismatch");
    return HoloFunction(n, SumNode{std::move(terms)});
  }
  static HoloFunction product(HoloFunction f, HoloFunction g) {
    if (f.dim() != g.dim()) throw ParameterError("product: dimension mismatch");
    const int n = f.dim();
    return HoloFunction(n, ProductNode{{std::move(f), std::move(g)}});
  }
  static HoloFunction cesaro(HoloFunction rg, HoloFunction f) {
    if (f.dim() != rg.dim()) throw ParameterError("cesaro: dimension mismatch");
    const int n = f.dim();
    return HoloFunction(n, CesaroNode{{std::move(rg), std::move(f)}});
  }
  static HoloFunction constant(int n, cplx c) { return Series::constant(n, c); }

  int dim() const noexcept { return n_; }
  const Node& node() const noexcept { return *node_; }
  const Series* as_series() const noexcept {
    auto* s = std::get_if<SeriesNode>(node_.get());
    return s ? &s->series : nullptr;
  }

 private:
  HoloFunction(int n, Node node) : n_(n), node_(std::make_shared<Node>(std::move(node))) {}

  int n_;
  std::shared_ptr<const Node> node_;
};

inline HoloFunction operator+(const HoloFunction& f, const HoloFunction& g) {
  if (f.as_series() && g.as_series()) return *f.as_series() + *g.as_series();
  return HoloFunction::sum({f, g});
}

inline HoloFunction operator*(cplx c, const HoloFunction& f) {
  if (auto* s = f.as_series()) return s->scaled(c);
  if (auto* k = std::get_if<KernelNode>(&f.node())) return HoloFunction::kernel(k->a, k->s, k->c * c);
  return HoloFunction::product(HoloFunction::constant(f.dim(), c), f);
}

inline HoloFunction operator*(const HoloFunction& f, const HoloFunction& g) {
  if (f.as_series() && g.as_series()) return *f.as_series() * *g.as_series();
  return HoloFunction::product(f, g);
}

namespace detail {

/// Panels on [0,1] graded toward t = 1 down to width (1-|z|)/4, 16 Gauss points each.
inline const Rule1D& gl16() {
  static const Rule1D r = gauss_jacobi_unit(16, 0.0, 0.0);
  return r;
}

// zero fixes the accumulator shape; a default Point has dimension 0.
template <class R, class F>
R graded_t_integral(double rz, const R& zero, F&& g) {
  const auto& base = gl16();
  const double finest = std::max(1e-12, (1.0 - rz) / 4.0);
  R total = zero;
  double lo = 0.0, gap = 0.5;
  for (;;) {
    const bool last = gap <= finest;
    const double hi = last ? 1.0 : 1.0 - gap;
    R part = zero;
    for (std::size_t i = 0; i < base.x.size(); ++i) part += base.w[i] * g(lo + (hi - lo) * base.x[i]);
    total += (hi - lo) * part;
    if (last) break;
    lo = hi;
    gap *= 0.5;
  }
  return total;
}

}  // namespace detail

inline cplx eval_unchecked(const HoloFunction& f, const Point& z);
inline Point gradient_unchecked(const HoloFunction& f, const Point& z);

inline cplx eval_unchecked(const HoloFunction& f, const Point& z) {
  return std::visit(
      [&](const auto& node) -> cplx {
        using N = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<N, SeriesNode>) {
          return eval(node.series, z);
        } else if constexpr (std::is_same_v<N, KernelNode>) {
          return node.c * std::pow(1.0 - inner(z, node.a), -node.s);
        } else if constexpr (std::is_same_v<N, SumNode>) {
          cplx s = 0.0;
          for (const auto& t : node.terms) s += eval_unchecked(t, z);
          return s;
        } else if constexpr (std::is_same_v<N, ProductNode>) {
          return eval_unchecked(node.factors[0], z) * eval_unchecked(node.factors[1], z);
        } else {
          const auto& rg = node.parts[0];
          const auto& g = node.parts[1];
          return detail::graded_t_integral(z.norm(), cplx(0.0), [&](double t) {
            const Point tz = z * cplx(t);
            return eval_unchecked(g, tz) * eval_unchecked(rg, tz) / t;
          });
        }
      },
      f.node());
}

inline Point gradient_unchecked(const HoloFunction& f, const Point& z) {
  return std::visit(
      [&](const auto& node) -> Point {
        using N = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<N, SeriesNode>) {
          return gradient(node.series, z);
        } else if constexpr (std::is_same_v<N, KernelNode>) {
          const cplx w = 1.0 - inner(z, node.a);
          const cplx common = node.c * node.s * std::pow(w, -node.s - 1.0);
          Point g(z.dim());
          for (int j = 0; j < z.dim(); ++j) g[j] = common * std::conj(node.a[j]);
          return g;
        } else if constexpr (std::is_same_v<N, SumNode>) {
          Point g(z.dim());
          for (const auto& t : node.terms) g += gradient_unchecked(t, z);
          return g;
        } else if constexpr (std::is_same_v<N, ProductNode>) {
          const auto& a = node.factors[0];
          const auto& b = node.factors[1];
          return gradient_unchecked(a, z) * eval_unchecked(b, z) + gradient_unchecked(b, z) * eval_unchecked(a, z);
        } else {
          // ∂_j T_g f(z) = ∫₀¹ ∂_j(f·Rg)(tz) dt.
          const auto& rg = node.parts[0];
          const auto& g = node.parts[1];
          return detail::graded_t_integral(z.norm(), Point(z.dim()), [&](double t) {
            const Point tz = z * cplx(t);
            return gradient_unchecked(g, tz) * eval_unchecked(rg, tz) + gradient_unchecked(rg, tz) * eval_unchecked(g, tz);
          });
        }
      },
      f.node());
}

inline cplx eval(const HoloFunction& f, const Point& z) {
  if (z.dim() != f.dim()) throw ParameterError("eval: dimension mismatch");
  require_in_ball(z, "eval");
  return eval_unchecked(f, z);
}

inline Point gradient(const HoloFunction& f, const Point& z) {
  if (z.dim() != f.dim()) throw ParameterError("gradient: dimension mismatch");
  require_in_ball(z, "gradient");
  return gradient_unchecked(f, z);
}

/// Rf(z) = Σ z_j ∂_j f(z), from the exact gradient.
inline cplx radial_derivative_at(const HoloFunction& f, const Point& z) {
  const Point g = gradient(f, z);
  cplx s = 0.0;
  for (int j = 0; j < z.dim(); ++j) s += z[j] * g[j];
  return s;
}

/// Symbolic radial derivative.
inline HoloFunction radial_derivative(const HoloFunction& f) {
  return std::visit(
      [&](const auto& node) -> HoloFunction {
        using N = std::decay_t<decltype(node)>;
        const int n = f.dim();
        if constexpr (std::is_same_v<N, SeriesNode>) {
          return node.series.radial_derivative();
        } else if constexpr (std::is_same_v<N, KernelNode>) {
          // R c(1-⟨z,a⟩)^{-s} = c s ⟨z,a⟩ (1-⟨z,a⟩)^{-s-1}
          Series lin = inner_power(node.a, 1).scaled(node.c * node.s);
          return HoloFunction::product(lin, HoloFunction::kernel(node.a, node.s + 1.0));
        } else if constexpr (std::is_same_v<N, SumNode>) {
          std::vector<HoloFunction> terms;
          for (const auto& t : node.terms) terms.push_back(radial_derivative(t));
          return HoloFunction::sum(std::move(terms));
        } else if constexpr (std::is_same_v<N, ProductNode>) {
          const auto& a = node.factors[0];
          const auto& b = node.factors[1];
          return radial_derivative(a) * b + a * radial_derivative(b);
        } else {
          (void)n;
          return node.parts[1] * node.parts[0];  // R(T_g f) = f·Rg
        }
      },
      f.node());
}

/// Taylor expansion to total degree `degree`.
inline Series to_series(const HoloFunction& f, int degree) {
  return std::visit(
      [&](const auto& node) -> Series {
        using N = std::decay_t<decltype(node)>;
        const int n = f.dim();
        if constexpr (std::is_same_v<N, SeriesNode>) {
          return node.series.truncated(degree);
        } else if constexpr (std::is_same_v<N, KernelNode>) {
          // (1-w)^{-s} = Σ (s)_j / j! w^j
          Series r(n), lin = inner_power(node.a, 1), pw = Series::constant(n, 1.0);
          double coef = 1.0;
          for (int j = 0; j <= degree; ++j) {
            r += pw.scaled(node.c * coef);
            coef *= (node.s + j) / (j + 1.0);
            pw = pw.multiply(lin, degree);
          }
          return r;
        } else if constexpr (std::is_same_v<N, SumNode>) {
          Series r(n);
          for (const auto& t : node.terms) r += to_series(t, degree);
          return r;
        } else if constexpr (std::is_same_v<N, ProductNode>) {
          return to_series(node.factors[0], degree).multiply(to_series(node.factors[1], degree), degree);
        } else {
          // T_g f coefficients: Σ a_m b_k z^{m+k} / (|m|+|k|)
          const Series rg = to_series(node.parts[0], degree);
          const Series ff = to_series(node.parts[1], degree);
          Series r(n);
          for (const auto& [m, a] : ff.terms())
            for (const auto& [k, b] : rg.terms()) {
              const MultiIndex j = m + k;
              const int d = total_degree(j);
              if (d == 0 || d > degree) continue;
              r.add_term(j, a * b / static_cast<double>(d));
            }
          return r;
        }
      },
      f.node());
}

/// Centres of every kernel factor in the expression.
inline void collect_kernel_centers(const HoloFunction& f, std::vector<Point>& out) {
  std::visit(
      [&](const auto& node) {
        using N = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<N, KernelNode>) {
          out.push_back(node.a);
        } else if constexpr (std::is_same_v<N, SumNode>) {
          for (const auto& t : node.terms) collect_kernel_centers(t, out);
        } else if constexpr (std::is_same_v<N, ProductNode>) {
          for (const auto& t : node.factors) collect_kernel_centers(t, out);
        } else if constexpr (std::is_same_v<N, CesaroNode>) {
          for (const auto& t : node.parts) collect_kernel_centers(t, out);
        }
      },
      f.node());
}

inline std::vector<Point> kernel_centers(const HoloFunction& f) {
  std::vector<Point> out;
  collect_kernel_centers(f, out);
  return out;
}

/// ∇̃f(z) = ∇(f∘φ_z)(0) = Dφ_z(0)ᵀ ∇f(z).
inline Point invariant_gradient(const HoloFunction& f, const Point& z) {
  const Point g = gradient(f, z);
  const CMatrix j = mobius_jacobian0(z);
  Point out(z.dim());
  for (int l = 0; l < z.dim(); ++l)
    for (int k = 0; k < z.dim(); ++k) out[l] += g[k] * j(k, l);
  return out;
}

/// Pointwise derivative moduli at z.
struct DerivativeSample {
  double radial = 0.0;     ///< (1-|z|²)|Rf|
  double gradient = 0.0;   ///< (1-|z|²)|∇f|
  double invariant = 0.0;  ///< |∇̃f|
};

inline DerivativeSample derivative_sample(const HoloFunction& f, const Point& z) {
  require_in_ball(z, "derivative sample");
  const Point g = gradient_unchecked(f, z);
  const double w = 1.0 - z.norm2();
  cplx rf = 0.0;
  for (int j = 0; j < z.dim(); ++j) rf += z[j] * g[j];
  const CMatrix jac = mobius_jacobian0(z);
  Point inv(z.dim());
  for (int l = 0; l < z.dim(); ++l)
    for (int k = 0; k < z.dim(); ++k) inv[l] += g[k] * jac(k, l);
  return {w * std::abs(rf), w * g.norm(), inv.norm()};
}

struct ChainReport {
  double max_violation = 0.0;  ///< relative, max over both inequalities
  std::size_t samples = 0;
  bool ok(double tol = 1e-10) const { return max_violation <= tol; }
};

inline double relative_excess(double lhs, double rhs) {
  if (lhs <= rhs) return 0.0;
  return (lhs - rhs) / std::max(lhs, rhs);
}

/// (1-|z|²)|Rf| ≤ (1-|z|²)|∇f| ≤ |∇̃f| at every sample.
inline ChainReport chain_inequality_check(const HoloFunction& f, const std::vector<Point>& samples) {
  ChainReport r;
  for (const auto& z : samples) {
    const auto d = derivative_sample(f, z);
    r.max_violation = std::max({r.max_violation, relative_excess(d.radial, d.gradient), relative_excess(d.gradient, d.invariant)});
    ++r.samples;
  }
  return r;
}

/// f_a(z) = Φ⁻¹((1-|a|)^{-(n+1+α)}) ((1-|a|²)/(1-⟨z,a⟩))^{k(n+1+α)}.
inline HoloFunction test_function(const Point& a, double k, const GrowthFunction& phi, double alpha) {
  require_in_ball(a, "test function centre");
  const double p = phi.p_phi();
  if (!(k > 1.0)) throw ParameterError("test function needs k > 1");
  if (!(k > 1.0 / p)) throw ParameterError("test function needs k > 1/p");
  const int n = a.dim();
  const double e = n + 1.0 + alpha;
  const double ra = a.norm();
  const double s = k * e;
  const double scale = phi.inverse(std::pow(1.0 - ra, -e)) * std::pow(1.0 - a.norm2(), s);
  return HoloFunction::kernel(a, s, scale);
}

/// Smallest admissible integer-step k: max(1, 1/p) + 1.
inline double default_test_exponent(const GrowthFunction& phi) { return std::max(1.0, 1.0 / phi.p_phi()) + 1.0; }

}  // namespace bol
