#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "bol/jacobi.hpp"
#include "bol/measure.hpp"
#include "bol/mobius.hpp"
#include "oracles.hpp"

using namespace bol;

TEST(Jacobi, IntegratesPolynomialsExactly) {
  for (double a : {0.0, 1.0, 2.5, -0.5}) {
    for (double b : {0.0, 1.0}) {
      const auto r = gauss_jacobi_unit(12, a, b);
      for (int k = 0; k <= 23; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], k);
        const double expect = oracle::beta_integral(k + b, a) / oracle::beta_integral(b, a);
        EXPECT_NEAR(s / expect, 1.0, 1e-12) << "a=" << a << " b=" << b << " k=" << k;
      }
    }
  }
}

TEST(Jacobi, LegendreOnInterval) {
  const auto r = gauss_legendre(8, -1.0, 3.0);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], 15);
  EXPECT_NEAR(s, (std::pow(3.0, 16) - 1.0) / 16.0, 1e-12 * std::pow(3.0, 16));
}

TEST(Measure, Normalizer) {
  for (int n = 1; n <= 4; ++n)
    for (double alpha : {-0.5, 0.0, 1.0, 2.5}) {
      const auto mu = make_measure(n, alpha);
      // c_α = Γ(n+α+1) / (n! Γ(α+1))
      EXPECT_NEAR(mu.c_alpha, std::tgamma(n + alpha + 1.0) / (std::tgamma(n + 1.0) * std::tgamma(alpha + 1.0)), 1e-12);
    }
  EXPECT_NEAR(make_measure(1, 0.0).c_alpha, 1.0, 1e-15);
  EXPECT_NEAR(make_measure(1, 1.0).c_alpha, 2.0, 1e-14);
  EXPECT_THROW(make_measure(1, -1.0), DomainError);
  EXPECT_THROW(make_measure(5, 0.0), ParameterError);
  EXPECT_THROW(make_measure(0, 0.0), ParameterError);
}

TEST(Measure, DiscMomentMatchesOracle) {
  for (double alpha : {0.0, 1.0, 2.5})
    for (int k = 0; k < 12; ++k) EXPECT_NEAR(disc_moment(k, alpha), oracle::disc_moment(k, alpha), 1e-14);
  EXPECT_NEAR(disc_moment(1, 0.0), 0.5, 1e-16);
  EXPECT_NEAR(disc_moment(2, 1.0), 1.0 / 6.0, 1e-16);
}

TEST(ProductRule, TotalMassAndMomentsDisc) {
  for (double alpha : {0.0, 1.0, 2.5}) {
    const auto mu = make_measure(1, alpha);
    const auto rule = product_rule(mu, 24);
    EXPECT_NEAR(integrate(rule, [](const Point&) { return 1.0; }), 1.0, 1e-14);
    for (int k = 0; k <= 12; ++k) {
      const double v = integrate(rule, [k](const Point& z) { return std::pow(z.norm2(), k); });
      EXPECT_NEAR(v, oracle::disc_moment(k, alpha), 1e-14) << k;
    }
    for (int j = 0; j <= 6; ++j)
      for (int l = 0; l <= 6; ++l) {
        if (j == l) continue;
        const cplx v = integrate(rule, [j, l](const Point& z) { return std::pow(z[0], j) * std::pow(std::conj(z[0]), l); });
        EXPECT_LT(std::abs(v), 1e-15);
      }
  }
}

TEST(ProductRule, MomentsBall2) {
  for (double alpha : {0.0, 1.0}) {
    const auto rule = product_rule(make_measure(2, alpha), 16);
    EXPECT_NEAR(integrate(rule, [](const Point&) { return 1.0; }), 1.0, 1e-14);
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; a + b <= 8; ++b) {
        const double v = integrate(rule, [a, b](const Point& z) {
          return std::pow(std::norm(z[0]), a) * std::pow(std::norm(z[1]), b);
        });
        EXPECT_NEAR(v, oracle::ball_moment({a, b}, alpha), 1e-14) << a << "," << b;
      }
    const cplx off = integrate(rule, [](const Point& z) { return z[0] * std::conj(z[1]); });
    EXPECT_LT(std::abs(off), 1e-15);
  }
}

TEST(ProductRule, UnsupportedAboveTwo) {
  EXPECT_THROW(product_rule(make_measure(3, 0.0), 8), UnsupportedError);
  EXPECT_EQ(build_rule(make_measure(3, 0.0), {48, 1000, 1, 0}).kind, RuleKind::monte_carlo);
}

TEST(MonteCarlo, MomentsWithinFourSigma) {
  for (int n : {3, 4}) {
    for (double alpha : {0.0, 1.0}) {
      const auto rule = monte_carlo_rule(make_measure(n, alpha), 50000, 7);
      for (int k : {1, 2}) {
        auto f = [k](const Point& z) { return std::pow(std::norm(z[0]), k); };
        std::vector<int> m(n, 0);
        m[0] = k;
        const double v = integrate(rule, f);
        const double se = standard_error(rule, f);
        EXPECT_LE(std::abs(v - oracle::ball_moment(m, alpha)), 4.0 * se) << n << " " << alpha << " " << k;
      }
    }
  }
}

TEST(MonteCarlo, DeterministicForSeed) {
  const auto mu = make_measure(3, 0.5);
  const auto a = monte_carlo_rule(mu, 1000, 42), b = monte_carlo_rule(mu, 1000, 42), c = monte_carlo_rule(mu, 1000, 43);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.nodes[i], b.nodes[i]);
    EXPECT_EQ(a.weights[i], b.weights[i]);
  }
  EXPECT_FALSE(a.nodes[0] == c.nodes[0]);
  for (const auto& z : a.nodes) EXPECT_LT(z.norm2(), 1.0);
}

TEST(Integrate, RejectsNonFinite) {
  const auto rule = product_rule(make_measure(1, 0.0), 8);
  try {
    integrate(rule, [](const Point& z) { return z.norm2() > 0.5 ? std::nan("") : 1.0; });
    FAIL();
  } catch (const NonFiniteError& e) {
    EXPECT_GT(rule.nodes[e.node()].norm2(), 0.5);
  }
}

TEST(FocusedRule, KernelIntegralMatchesSeries) {
  for (int n : {1, 2}) {
    for (double alpha : {0.0, 1.0}) {
      for (double r : {0.5, 0.9, 0.99, 0.999}) {
        Point a(n);
        a[0] = r;
        const double s = (n + 1 + alpha) / 2.0 + 0.5;  // singular enough to need the grading
        const auto rule = focused_rule(make_measure(n, alpha), a);
        const double v = integrate(rule, [&](const Point& z) { return std::pow(std::abs(1.0 - inner(z, a)), -2.0 * s); });
        EXPECT_NEAR(v / oracle::kernel_l2(r, s, alpha, n), 1.0, 1e-6) << n << " " << alpha << " " << r;
      }
    }
  }
}

TEST(FocusedRule, RotatedCentreAgrees) {
  const auto mu = make_measure(2, 0.0);
  Point a{cplx(0.6, 0.3), cplx(0.0, -0.5)};
  const double r = a.norm();
  const auto rule = focused_rule(mu, a);
  const double v = integrate(rule, [&](const Point& z) { return std::pow(std::abs(1.0 - inner(z, a)), -5.0); });
  EXPECT_NEAR(v / oracle::kernel_l2(r, 2.5, 0.0, 2), 1.0, 1e-6);
}

TEST(FocusedRule, RejectsOutsideCentre) {
  EXPECT_THROW(focused_rule(make_measure(1, 0.0), Point{cplx(1.0)}), DomainError);
}

// ---------------------------------------------------------------------------

namespace {
std::vector<Point> random_points(int n, int count, std::uint64_t seed, double rmax) {
  SplitMix64 rng(seed);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count) {
    Point z(n);
    for (int j = 0; j < n; ++j) z[j] = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    if (z.norm() < rmax) out.push_back(z);
  }
  return out;
}
}  // namespace

TEST(Mobius, Identities) {
  for (int n : {1, 2, 3}) {
    const auto as = random_points(n, 40, 11 + n, 0.99);
    const auto zs = random_points(n, 25, 97 + n, 0.99);
    for (const auto& a : as) {
      const MobiusMap phi(a);
      EXPECT_LT((phi.apply(Point(n)) - a).norm(), 1e-14);
      EXPECT_LT(phi.apply(a).norm(), 1e-12);
      for (const auto& z : zs) {
        const Point w = phi.apply(z);
        EXPECT_LT((phi.apply(w) - z).norm(), 1e-9);
        const double lhs = 1.0 - w.norm2();
        const double rhs = (1.0 - a.norm2()) * (1.0 - z.norm2()) / std::norm(1.0 - inner(z, a));
        EXPECT_NEAR(lhs / rhs, 1.0, 1e-9);
      }
    }
  }
}

TEST(Mobius, JacobianMatchesDifferences) {
  for (int n : {1, 2, 3}) {
    for (const auto& a : random_points(n, 20, 5 + n, 0.95)) {
      const auto J = mobius_jacobian0(a);
      const double h = 1e-6;
      for (int l = 0; l < n; ++l) {
        Point e(n);
        e[l] = h;
        const Point d = mobius_apply(a, e) - mobius_apply(a, cplx(-1.0) * e);
        for (int k = 0; k < n; ++k) EXPECT_NEAR(std::abs(d[k] / (2.0 * h) - J(k, l)), 0.0, 1e-8);
      }
      // det: (-1)^n (1-|a|²)^{(n+1)/2}
      const double det = std::abs(J.determinant());
      EXPECT_NEAR(det, std::pow(1.0 - a.norm2(), (n + 1) / 2.0), 1e-12);
    }
  }
}

TEST(Mobius, ZeroCentreIsNegation) {
  const Point z{cplx(0.3, 0.1), cplx(-0.2, 0.4)};
  EXPECT_LT((mobius_apply(Point(2), z) + z).norm(), 1e-16);
}

TEST(Mobius, KernelFactor) {
  const Point z{cplx(0.5)}, w{cplx(0.5)};
  EXPECT_NEAR(std::abs(kernel_factor(z, w, 1.0) - cplx(4.0 / 3.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(kernel_factor(Point(1), w, 3.7) - cplx(1.0)), 0.0, 1e-15);
  const Point zi{cplx(0.0, 0.6)}, wi{cplx(0.8)};
  // (1 - 0.48i)^{-2}
  EXPECT_NEAR(std::abs(kernel_factor(zi, wi, 2.0) - std::pow(cplx(1.0, -0.48), -2.0)), 0.0, 1e-14);
  EXPECT_THROW(kernel_factor(Point{cplx(1.0)}, w, 1.0), DomainError);
}
