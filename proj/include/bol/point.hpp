#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>

#include "bol/error.hpp"

namespace bol {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 4;

/// A point of ℂⁿ, n ≤ kMaxDim, stored inline. Also used for complex n-vectors
/// (gradients).
class Point {
 public:
  Point() = default;
  explicit Point(int n) : n_(n) {
    if (n < 1 || n > kMaxDim) throw ParameterError("dimension must be in [1, 4]");
  }
  Point(std::initializer_list<cplx> coords) : Point(static_cast<int>(coords.size())) {
    int j = 0;
    for (auto c : coords) c_[j++] = c;
  }

  int dim() const noexcept { return n_; }
  cplx& operator[](int j) noexcept { return c_[j]; }
  const cplx& operator[](int j) const noexcept { return c_[j]; }

  double norm2() const noexcept {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += std::norm(c_[j]);
    return s;
  }
  double norm() const noexcept { return std::sqrt(norm2()); }

  Point& operator+=(const Point& o) noexcept {
    for (int j = 0; j < n_; ++j) c_[j] += o.c_[j];
    return *this;
  }
  Point& operator-=(const Point& o) noexcept {
    for (int j = 0; j < n_; ++j) c_[j] -= o.c_[j];
    return *this;
  }
  Point& operator*=(cplx s) noexcept {
    for (int j = 0; j < n_; ++j) c_[j] *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) noexcept { return a += b; }
  friend Point operator-(Point a, const Point& b) noexcept { return a -= b; }
  friend Point operator*(cplx s, Point a) noexcept { return a *= s; }
  friend Point operator*(Point a, cplx s) noexcept { return a *= s; }

  bool operator==(const Point& o) const noexcept {
    if (n_ != o.n_) return false;
    for (int j = 0; j < n_; ++j)
      if (c_[j] != o.c_[j]) return false;
    return true;
  }

 private:
  std::array<cplx, kMaxDim> c_{};
  int n_ = 0;
};

using CVec = Point;

/// ⟨z,w⟩ = Σ z_j conj(w_j).
inline cplx inner(const Point& z, const Point& w) noexcept {
  cplx s = 0.0;
  for (int j = 0; j < z.dim(); ++j) s += z[j] * std::conj(w[j]);
  return s;
}

inline Point zero_point(int n) { return Point(n); }

inline Point real_axis_point(int n, double r) {
  Point z(n);
  z[0] = r;
  return z;
}

inline void require_in_ball(const Point& z, const char* what) {
  if (!(z.norm2() < 1.0)) throw DomainError(std::string(what) + ": point outside the open unit ball");
}

}  // namespace bol
