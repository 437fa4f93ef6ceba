#pragma once

#include <cmath>

#include <Eigen/Core>

#include "bol/error.hpp"
#include "bol/point.hpp"

namespace bol {

using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

/// The involutive automorphism φ_a of 𝔹ⁿ exchanging 0 and a:
/// φ_a(z) = (a - P_a z - s_a Q_a z) / (1 - ⟨z,a⟩), s_a = √(1-|a|²).
class MobiusMap {
 public:
  explicit MobiusMap(const Point& a) : a_(a), a2_(a.norm2()), s_(0.0) {
    require_in_ball(a, "mobius centre");
    s_ = std::sqrt(1.0 - a2_);
  }

  const Point& center() const noexcept { return a_; }
  double s() const noexcept { return s_; }

  /// P_a z = ⟨z,a⟩ a / |a|² (0 when a = 0).
  Point project(const Point& z) const {
    if (a2_ == 0.0) return Point(z.dim());
    return a_ * (inner(z, a_) / a2_);
  }

  Point apply(const Point& z) const {
    if (z.dim() != a_.dim()) throw ParameterError("mobius: dimension mismatch");
    require_in_ball(z, "mobius argument");
    const Point pz = project(z);
    const Point qz = z - pz;
    Point num = a_ - pz - qz * cplx(s_);
    return num * (1.0 / (1.0 - inner(z, a_)));
  }

  /// Dφ_a(0) = -(1-|a|²) P_a - s_a Q_a.
  CMatrix jacobian0() const {
    const int n = a_.dim();
    CMatrix j(n, n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const cplx p = a2_ == 0.0 ? cplx(0.0) : a_[k] * std::conj(a_[l]) / a2_;
        const cplx q = (k == l ? 1.0 : 0.0) - p;
        j(k, l) = -(1.0 - a2_) * p - s_ * q;
      }
    return j;
  }

 private:
  Point a_;
  double a2_;
  double s_;
};

inline Point mobius_apply(const Point& a, const Point& z) { return MobiusMap(a).apply(z); }
inline CMatrix mobius_jacobian0(const Point& a) { return MobiusMap(a).jacobian0(); }

/// (1 - ⟨z,w⟩)^{-s}, principal branch.
inline cplx kernel_factor(const Point& z, const Point& w, double s) {
  require_in_ball(z, "kernel_factor z");
  require_in_ball(w, "kernel_factor w");
  return std::pow(1.0 - inner(z, w), -s);
}

}  // namespace bol
