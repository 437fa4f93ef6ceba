#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include <boost/rational.hpp>

#include "bol/error.hpp"
#include "bol/point.hpp"

namespace bol {

using MultiIndex = std::array<int, kMaxDim>;

inline int total_degree(const MultiIndex& m) noexcept {
  int s = 0;
  for (int v : m) s += v;
  return s;
}

inline MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) noexcept {
  MultiIndex c{};
  for (int j = 0; j < kMaxDim; ++j) c[j] = a[j] + b[j];
  return c;
}

/// Gaussian rationals, for exact coefficient identities.
struct QComplex {
  using Q = boost::rational<long long>;
  Q re{0}, im{0};

  QComplex() = default;
  QComplex(long long r) : re(r) {}
  QComplex(Q r, Q i) : re(r), im(i) {}

  QComplex& operator+=(const QComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  QComplex& operator-=(const QComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
  friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
  friend QComplex operator*(const QComplex& a, const QComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend QComplex operator/(const QComplex& a, const QComplex& b) {
    const Q d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  friend bool operator==(const QComplex& a, const QComplex& b) { return a.re == b.re && a.im == b.im; }

  explicit operator cplx() const { return {boost::rational_cast<double>(re), boost::rational_cast<double>(im)}; }
};

inline bool is_zero(const cplx& c) noexcept { return c == cplx(0.0); }
// Compare against Q(0): rational == int recurses under C++20 rewritten comparisons.
inline bool is_zero(const QComplex& c) noexcept { return c.re == QComplex::Q(0) && c.im == QComplex::Q(0); }

/// Finite power series Σ a_m z^m in n ≤ 4 variables with coefficients in T.
/// Zero coefficients are never stored.
template <class T>
class BasicSeries {
 public:
  using Map = std::map<MultiIndex, T>;

  BasicSeries() = default;
  explicit BasicSeries(int n) : n_(n) {
    if (n < 1 || n > kMaxDim) throw ParameterError("series dimension must be in [1, 4]");
  }

  static BasicSeries constant(int n, T c) {
    BasicSeries s(n);
    s.add_term({}, c);
    return s;
  }
  static BasicSeries monomial(int n, const MultiIndex& m, T c = T(1)) {
    BasicSeries s(n);
    s.add_term(m, c);
    return s;
  }
  /// z_j
  static BasicSeries coordinate(int n, int j) {
    MultiIndex m{};
    m[j] = 1;
    return monomial(n, m);
  }

  int dim() const noexcept { return n_; }
  const Map& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  T coefficient(const MultiIndex& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? T(0) : it->second;
  }

  int degree() const noexcept {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
  }

  void add_term(const MultiIndex& m, const T& c) {
    for (int j = n_; j < kMaxDim; ++j)
      if (m[j] != 0) throw ParameterError("series term uses a variable beyond the dimension");
    for (int j = 0; j < n_; ++j)
      if (m[j] < 0) throw ParameterError("negative exponent in series term");
    if (is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (is_zero(it->second)) terms_.erase(it);
    }
  }

  BasicSeries& operator+=(const BasicSeries& o) {
    check_dim(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  BasicSeries& operator-=(const BasicSeries& o) {
    check_dim(o);
    for (const auto& [m, c] : o.terms_) add_term(m, T(0) - c);
    return *this;
  }
  friend BasicSeries operator+(BasicSeries a, const BasicSeries& b) { return a += b; }
  friend BasicSeries operator-(BasicSeries a, const BasicSeries& b) { return a -= b; }

  BasicSeries scaled(const T& s) const {
    BasicSeries r(n_);
    for (const auto& [m, c] : terms_) r.add_term(m, c * s);
    return r;
  }

  /// Product, keeping terms of total degree ≤ max_degree (< 0: keep all).
  BasicSeries multiply(const BasicSeries& o, int max_degree = -1) const {
    check_dim(o);
    BasicSeries r(n_);
    for (const auto& [m1, c1] : terms_)
      for (const auto& [m2, c2] : o.terms_) {
        const MultiIndex m = m1 + m2;
        if (max_degree >= 0 && total_degree(m) > max_degree) continue;
        r.add_term(m, c1 * c2);
      }
    return r;
  }
  friend BasicSeries operator*(const BasicSeries& a, const BasicSeries& b) { return a.multiply(b); }

  BasicSeries truncated(int max_degree) const {
    BasicSeries r(n_);
    for (const auto& [m, c] : terms_)
      if (total_degree(m) <= max_degree) r.add_term(m, c);
    return r;
  }

  /// R: z^m ↦ |m| z^m.
  BasicSeries radial_derivative() const {
    BasicSeries r(n_);
    for (const auto& [m, c] : terms_) r.add_term(m, c * T(total_degree(m)));
    return r;
  }

  /// ∂/∂z_j
  BasicSeries partial(int j) const {
    BasicSeries r(n_);
    for (const auto& [m, c] : terms_) {
      if (m[j] == 0) continue;
      MultiIndex d = m;
      --d[j];
      r.add_term(d, c * T(m[j]));
    }
    return r;
  }

  friend bool operator==(const BasicSeries& a, const BasicSeries& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }

 private:
  void check_dim(const BasicSeries& o) const {
    if (o.n_ != n_) throw ParameterError("series dimension mismatch");
  }

  int n_ = 1;
  Map terms_;
};

using Series = BasicSeries<cplx>;
using ExactSeries = BasicSeries<QComplex>;

inline Series to_double(const ExactSeries& s) {
  Series r(s.dim());
  for (const auto& [m, c] : s.terms()) r.add_term(m, static_cast<cplx>(c));
  return r;
}

/// Σ a_m z^m by direct summation over precomputed power tables.
inline cplx eval(const Series& s, const Point& z) {
  if (s.empty()) return 0.0;
  const int n = s.dim();
  int maxdeg = s.degree();
  std::array<std::vector<cplx>, kMaxDim> pw;
  for (int j = 0; j < n; ++j) {
    pw[j].resize(maxdeg + 1);
    pw[j][0] = 1.0;
    for (int e = 1; e <= maxdeg; ++e) pw[j][e] = pw[j][e - 1] * z[j];
  }
  cplx sum = 0.0;
  for (const auto& [m, c] : s.terms()) {
    cplx t = c;
    for (int j = 0; j < n; ++j) t *= pw[j][m[j]];
    sum += t;
  }
  return sum;
}

namespace detail {

using TermList = std::vector<std::pair<MultiIndex, cplx>>;

inline cplx horner(const TermList& terms, int var, int n, const Point& z) {
  if (var == n) {
    cplx s = 0.0;
    for (const auto& t : terms) s += t.second;
    return s;
  }
  std::map<int, TermList> groups;
  for (const auto& t : terms) groups[t.first[var]].push_back(t);
  const int top = groups.rbegin()->first;
  cplx acc = 0.0;
  for (int e = top; e >= 0; --e) {
    acc *= z[var];
    auto it = groups.find(e);
    if (it != groups.end()) acc += horner(it->second, var + 1, n, z);
  }
  return acc;
}

}  // namespace detail

/// Nested Horner evaluation, one variable at a time.
inline cplx eval_horner(const Series& s, const Point& z) {
  if (s.empty()) return 0.0;
  detail::TermList terms(s.terms().begin(), s.terms().end());
  return detail::horner(terms, 0, s.dim(), z);
}

inline Point gradient(const Series& s, const Point& z) {
  Point g(s.dim());
  for (int j = 0; j < s.dim(); ++j) g[j] = eval(s.partial(j), z);
  return g;
}

/// ⟨z,a⟩^j expanded as a series: (Σ conj(a_i) z_i)^j.
inline Series inner_power(const Point& a, int j) {
  const int n = a.dim();
  Series lin(n);
  for (int i = 0; i < n; ++i) {
    MultiIndex m{};
    m[i] = 1;
    lin.add_term(m, std::conj(a[i]));
  }
  Series r = Series::constant(n, 1.0);
  for (int k = 0; k < j; ++k) r = r.multiply(lin);
  return r;
}

}  // namespace bol
