#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "bol/growth.hpp"
#include "bol/operators.hpp"
#include "oracles.hpp"

using namespace bol;

namespace {

std::vector<Point> points(int n, int count, std::uint64_t seed, double rmax) {
  SplitMix64 rng(seed);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count) {
    Point z(n);
    for (int j = 0; j < n; ++j) z[j] = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    if (z.norm() < rmax) out.push_back(z);
  }
  return out;
}

Series poly(std::initializer_list<std::pair<int, cplx>> terms) {
  Series s(1);
  for (const auto& [k, c] : terms) s.add_term({k}, c);
  return s;
}

}  // namespace

TEST(Cesaro, SymbolNeedsZeroAtOrigin) {
  EXPECT_THROW(CesaroSymbol(poly({{0, 1.0}, {1, 1.0}})), SymbolInvariantError);
  EXPECT_NO_THROW(CesaroSymbol(poly({{1, 1.0}})));
}

TEST(Cesaro, CoefficientExamples) {
  const CesaroSymbol gz(poly({{1, 1.0}}));
  EXPECT_EQ(cesaro_apply_exact(gz, Series::constant(1, 1.0)), poly({{1, 1.0}}));
  const CesaroSymbol gz2(poly({{2, 1.0}}));
  const Series t = cesaro_apply_exact(gz2, poly({{1, 1.0}}));
  EXPECT_EQ(t.terms().size(), 1u);
  EXPECT_NEAR(std::abs(t.coefficient({3}) - 2.0 / 3.0), 0.0, 1e-16);
  // T_g f(0) = 0 always.
  EXPECT_EQ(t.coefficient({0}), cplx(0.0));
}

TEST(Cesaro, ExactMatchesNumeric) {
  for (int n : {1, 2}) {
    Series g(n), f(n);
    f.add_term({}, 1.0);
    if (n == 1) {
      g.add_term({1}, 1.0);
      g.add_term({2}, cplx(0.0, 2.0));
      g.add_term({3}, -0.5);
      f.add_term({3}, cplx(1.0, 1.0));
      f.add_term({1}, 3.0);
    } else {
      g.add_term({1}, 1.0);
      g.add_term({1, 1}, cplx(0.0, 2.0));
      g.add_term({0, 3}, -0.5);
      f.add_term({2, 1}, cplx(1.0, 1.0));
      f.add_term({0, 1}, 3.0);
    }
    const CesaroSymbol sym(g);
    const Series t = cesaro_apply_exact(sym, f);
    for (const auto& z : points(n, 30, 3 + n, 0.99)) {
      const cplx a = eval(t, z), b = cesaro_apply_numeric(sym, f, z);
      EXPECT_LT(std::abs(a - b), 1e-12 * (1.0 + std::abs(a)));
    }
  }
}

TEST(Cesaro, KernelInputUsesIntegralNode) {
  const CesaroSymbol sym(poly({{1, 1.0}, {2, 1.0}}));
  const auto f = HoloFunction::kernel(Point{cplx(0.95)}, 3.0);
  const auto tf = cesaro_apply(sym, f);
  EXPECT_EQ(tf.as_series(), nullptr);
  for (const auto& z : points(1, 20, 6, 0.9)) {
    // independent: fine composite trapezoid in t
    const int m = 200000;
    cplx s = 0.0;
    for (int i = 1; i <= m; ++i) {
      const double t = (i - 0.5) / m;
      const cplx w = t * z[0];
      s += std::pow(1.0 - 0.95 * w, -3.0) * (w + 2.0 * w * w) / t;
    }
    s /= static_cast<double>(m);
    EXPECT_LT(std::abs(eval(tf, z) - s), 1e-8 * std::abs(s));
  }
}

TEST(Cesaro, RadialDerivativeIdentity) {
  for (int n : {1, 2, 3}) {
    SplitMix64 rng(50 + n);
    Series g(n), f(n);
    for (int t = 0; t < 6; ++t) {
      MultiIndex m{}, k{};
      for (int j = 0; j < n; ++j) {
        m[j] = rng.uniform_int(0, 3);
        k[j] = rng.uniform_int(0, 3);
      }
      if (total_degree(k) == 0) k[0] = 1;
      f.add_term(m, cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
      g.add_term(k, cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    }
    const auto r = radial_derivative_identity_check(CesaroSymbol(g), f, points(n, 20, 9, 0.99));
    EXPECT_LT(r.coefficient_deviation, 1e-14);
    EXPECT_LT(r.sample_deviation, 1e-13);
  }
}

TEST(Cesaro, RadialDerivativeIdentityExact) {
  using Q = QComplex::Q;
  for (int n : {1, 2}) {
    SplitMix64 rng(70 + n);
    ExactSeries g(n), f(n);
    for (int t = 0; t < 8; ++t) {
      MultiIndex m{}, k{};
      for (int j = 0; j < n; ++j) {
        m[j] = rng.uniform_int(0, 4);
        k[j] = rng.uniform_int(0, 4);
      }
      if (total_degree(k) == 0) k[0] = 2;
      f.add_term(m, QComplex(Q(rng.uniform_int(-9, 9), rng.uniform_int(1, 9)), Q(rng.uniform_int(-9, 9), 7)));
      g.add_term(k, QComplex(Q(rng.uniform_int(-9, 9), rng.uniform_int(1, 9)), Q(1, rng.uniform_int(1, 9))));
    }
    EXPECT_TRUE(radial_derivative_identity_exact(g.radial_derivative(), f));
  }
}

TEST(Bloch, ClosedForms) {
  // sup (1-r²) r = 2/(3√3); sup (1-r²) 2r² = 1/2.
  EXPECT_NEAR(bloch_seminorm(CesaroSymbol(poly({{1, 1.0}}))).M, 2.0 / (3.0 * std::sqrt(3.0)), 1e-12);
  const auto b2 = bloch_seminorm(CesaroSymbol(poly({{2, 1.0}})));
  EXPECT_NEAR(b2.M, 0.5, 1e-12);
  EXPECT_NEAR(b2.argmax_radius, std::sqrt(0.5), 1e-6);
  EXPECT_FALSE(b2.unbounded);
  // z + z²: maximize (1-r²)(r + 2r²) on the positive axis.
  const double ref = oracle::maximize([](double r) { return (1 - r * r) * (r + 2 * r * r); }, 0.0, 1.0);
  EXPECT_NEAR(bloch_seminorm(CesaroSymbol(poly({{1, 1.0}, {2, 1.0}}))).M, ref, 1e-10);
  // rotation invariance of the sup
  EXPECT_NEAR(bloch_seminorm(CesaroSymbol(poly({{1, 1.0}, {2, cplx(0.0, 1.0)}}))).M,
              oracle::maximize([](double r) {
                double best = 0.0;
                for (int k = 0; k < 2000; ++k) {
                  const cplx z = std::polar(r, 2 * std::numbers::pi * k / 2000);
                  best = std::max(best, (1 - r * r) * std::abs(z + cplx(0, 2) * z * z));
                }
                return best;
              }, 0.0, 1.0),
              1e-5);
}

TEST(Bloch, TwoVariables) {
  Series g(2);
  g.add_term({1, 1}, 1.0);  // Rg = 2 z₁z₂, |z₁z₂| ≤ |z|²/2
  EXPECT_NEAR(bloch_seminorm(CesaroSymbol(g)).M, 0.25, 1e-9);
  EXPECT_NEAR(bloch_seminorm(CesaroSymbol(Series::coordinate(2, 1))).M, 2.0 / (3.0 * std::sqrt(3.0)), 1e-9);
}

TEST(Bloch, ScalesLinearly) {
  const auto g = poly({{1, 1.0}, {3, cplx(0.5, 0.5)}});
  const double a = bloch_seminorm(CesaroSymbol(g)).M;
  EXPECT_NEAR(bloch_seminorm(CesaroSymbol(g.scaled(2.0))).M / a, 2.0, 1e-12);
}

TEST(Bloch, NearSingularSymbolFlagged) {
  const auto k = HoloFunction::kernel(Point{cplx(1.0 - 1e-9)}, 3.0);
  const auto g = HoloFunction::sum({k, HoloFunction::constant(1, -1.0)});
  EXPECT_TRUE(bloch_seminorm(CesaroSymbol(g)).unbounded);
}

TEST(Bloch, UnsupportedDimension) {
  EXPECT_THROW(bloch_seminorm(CesaroSymbol(Series::coordinate(3, 0))), UnsupportedError);
}

TEST(LittleBloch, PolynomialsVanishAtBoundary) {
  const auto rep = little_bloch_profile(CesaroSymbol(poly({{1, 1.0}, {4, 2.0}})), {0.5, 0.9, 0.99, 0.9999, 0.999999});
  EXPECT_TRUE(rep.little_bloch);
  EXPECT_NEAR(rep.profile.front().second, 0.75 * std::abs(0.5 + 8 * std::pow(0.5, 4)), 1e-12);
  EXPECT_THROW(little_bloch_profile(CesaroSymbol(poly({{1, 1.0}})), {0.5, 0.4}), ParameterError);
}

TEST(Bergman, ReproducesHolomorphicAndKillsConjugates) {
  for (double beta : {0.0, 1.0}) {
    const auto rule = product_rule(make_measure(1, beta), 48);
    const auto pf = bergman_project([](const Point& z) { return 1.0 + z[0] * z[0] - cplx(0.0, 2.0) * std::pow(z[0], 3); },
                                    beta, rule);
    const auto pc = bergman_project([](const Point& z) { return std::conj(z[0]); }, beta, rule);
    const auto pn = bergman_project([](const Point& z) { return std::norm(z[0]); }, beta, rule);
    for (const auto& z : points(1, 20, 13, 0.5)) {
      const cplx expect = 1.0 + z[0] * z[0] - cplx(0.0, 2.0) * std::pow(z[0], 3);
      EXPECT_LT(std::abs(pf(z) - expect), 1e-12);
      EXPECT_LT(std::abs(pc(z)), 1e-12);
      // P(|ξ|²) = ∫|ξ|² dν_β, a constant.
      EXPECT_LT(std::abs(pn(z) - oracle::disc_moment(1, beta)), 1e-12);
    }
  }
  EXPECT_THROW(bergman_project([](const Point&) { return cplx(1.0); }, 1.0, product_rule(make_measure(1, 0.0), 8)),
               ParameterError);
}

TEST(CesaroNorm, LowerBoundExample) {
  // ‖T_z 1‖ / ‖1‖ = ‖z‖ = √½ for Φ = t², α = 0.
  const auto lb = cesaro_norm_lower_bound(CesaroSymbol(poly({{1, 1.0}})), growth::power(2), make_measure(1, 0.0),
                                          {HoloFunction::constant(1, 1.0)});
  EXPECT_NEAR(lb.value, std::sqrt(0.5), 1e-14);
}

TEST(CesaroNorm, UpperCheckHolds) {
  const auto mu = make_measure(1, 1.0);
  std::vector<HoloFunction> fam{HoloFunction::constant(1, 1.0)};
  for (int k = 1; k <= 6; ++k) fam.push_back(Series::monomial(1, {k}));
  fam.push_back(test_function(Point{cplx(0.9)}, 2.0, growth::power(2), 1.0));
  for (const auto& phi : {growth::power(2), growth::power(0.5)}) {
    for (const auto& g : {poly({{1, 1.0}}), poly({{2, 1.0}}), poly({{1, 1.0}, {2, 1.0}})}) {
      const CesaroSymbol sym(g);
      const double M = bloch_seminorm(sym).M;
      const auto up = cesaro_upper_bound_check(sym, phi, mu, fam, M);
      EXPECT_TRUE(up.pass) << up.worst;
      EXPECT_EQ(up.modulars.size(), fam.size());
    }
  }
}
