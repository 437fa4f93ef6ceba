#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "bol/error.hpp"

namespace bol {

/// One-dimensional rule: nodes x and weights w.
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

namespace detail {

// Recurrence of the monic Jacobi polynomials on [-1, 1], weight (1-x)^a (1+x)^b:
// diagonal alpha_k and squared off-diagonal beta_k (k >= 1).
inline double jacobi_alpha(int k, double a, double b) {
  if (k == 0) return (b - a) / (a + b + 2.0);
  const double s = 2.0 * k + a + b;
  return (b * b - a * a) / (s * (s + 2.0));
}

inline double jacobi_beta(int k, double a, double b) {
  if (k == 1) {
    const double s = 2.0 + a + b;
    return 4.0 * (1.0 + a) * (1.0 + b) / (s * s * (s + 1.0));
  }
  const double s = 2.0 * k + a + b;
  return 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
}

}  // namespace detail

/// Gauss–Jacobi rule on [0, 1] for the weight (1-u)^a u^b, normalized so the
/// weights sum to 1. Nodes from the Golub–Welsch eigenproblem, polished by
/// Newton steps on the orthonormal recurrence; weights are Christoffel numbers.
inline Rule1D gauss_jacobi_unit(int npts, double a, double b) {
  if (npts < 1) throw ParameterError("gauss_jacobi: need at least one node");
  if (!(a > -1.0) || !(b > -1.0)) throw ParameterError("gauss_jacobi: exponents must exceed -1");
  std::vector<double> alpha(npts), sqb(npts + 1, 0.0);
  for (int k = 0; k < npts; ++k) alpha[k] = detail::jacobi_alpha(k, a, b);
  for (int k = 1; k <= npts; ++k) sqb[k] = std::sqrt(detail::jacobi_beta(k, a, b));

  Eigen::VectorXd diag(npts), sub(std::max(npts - 1, 0));
  for (int k = 0; k < npts; ++k) diag[k] = alpha[k];
  for (int k = 1; k < npts; ++k) sub[k - 1] = sqb[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

  // p_k orthonormal w.r.t. the normalized weight; returns (p_N, p_N', Σ_{k<N} p_k²).
  auto eval = [&](double x, double& pn, double& dpn, double& sum_sq) {
    double p_prev = 0.0, p = 1.0, d_prev = 0.0, d = 0.0;
    sum_sq = 0.0;
    for (int k = 0; k < npts; ++k) {
      sum_sq += p * p;
      const double p_next = ((x - alpha[k]) * p - sqb[k] * p_prev) / sqb[k + 1];
      const double d_next = (p + (x - alpha[k]) * d - sqb[k] * d_prev) / sqb[k + 1];
      p_prev = p;
      p = p_next;
      d_prev = d;
      d = d_next;
    }
    pn = p;
    dpn = d;
  };

  Rule1D r;
  r.x.resize(npts);
  r.w.resize(npts);
  for (int i = 0; i < npts; ++i) {
    double x = es.eigenvalues()[i];
    double pn, dpn, s;
    for (int it = 0; it < 3; ++it) {
      eval(x, pn, dpn, s);
      if (dpn == 0.0) break;
      const double step = pn / dpn;
      if (!std::isfinite(step) || std::abs(step) > 1e-6) break;
      x -= step;
      if (std::abs(step) < 1e-17) break;
    }
    eval(x, pn, dpn, s);
    r.x[i] = 0.5 * (1.0 + x);
    r.w[i] = 1.0 / s;
  }
  double total = 0.0;
  for (double w : r.w) total += w;
  for (double& w : r.w) w /= total;
  return r;
}

/// Gauss–Legendre rule on [lo, hi] (weights sum to hi - lo).
inline Rule1D gauss_legendre(int npts, double lo, double hi) {
  Rule1D r = gauss_jacobi_unit(npts, 0.0, 0.0);
  for (int i = 0; i < npts; ++i) {
    r.x[i] = lo + (hi - lo) * r.x[i];
    r.w[i] *= hi - lo;
  }
  return r;
}

}  // namespace bol
