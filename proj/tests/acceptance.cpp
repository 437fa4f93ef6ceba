// Acceptance run: one [PASS]/[FAIL] line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bol/bol.hpp"
#include "bol/cli.hpp"
#include "oracles.hpp"

using namespace bol;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0.0 && secs > limit_s) {
    o.ok = false;
    o.detail += " (over the " + fmt_g(limit_s) + " s budget)";
  }
  if (!o.ok) ++failures;
  std::printf("[%s] criterion %d: %s | %s | %.2f s\n", o.ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Point random_point(int n, SplitMix64& rng, double rmax) {
  while (true) {
    Point z(n);
    for (int j = 0; j < n; ++j) z[j] = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    if (z.norm() < rmax) return z;
  }
}

MultiIndex random_index(int n, int max_degree, SplitMix64& rng) {
  MultiIndex m{};
  const int d = rng.uniform_int(0, max_degree);
  for (int i = 0; i < d; ++i) ++m[rng.uniform_int(0, n - 1)];
  return m;
}

Series random_series(int n, int max_degree, SplitMix64& rng, bool vanish_at_zero) {
  Series s(n);
  const int terms = rng.uniform_int(1, 6);
  for (int t = 0; t < terms; ++t) {
    MultiIndex m = random_index(n, max_degree, rng);
    if (vanish_at_zero && total_degree(m) == 0) m[0] = 1;
    s.add_term(m, cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));
  }
  if (s.empty()) s.add_term(MultiIndex{1}, 1.0);
  return s;
}

ExactSeries random_exact(int n, int max_degree, SplitMix64& rng, bool vanish_at_zero) {
  using Q = QComplex::Q;
  ExactSeries s(n);
  const int terms = rng.uniform_int(1, 6);
  for (int t = 0; t < terms; ++t) {
    MultiIndex m = random_index(n, max_degree, rng);
    if (vanish_at_zero && total_degree(m) == 0) m[0] = 1;
    s.add_term(m, QComplex(Q(rng.uniform_int(-20, 20), rng.uniform_int(1, 12)),
                           Q(rng.uniform_int(-20, 20), rng.uniform_int(1, 12))));
  }
  if (s.empty()) s.add_term(MultiIndex{1}, QComplex(1));
  return s;
}

double recorded_c_min() {
  std::ifstream in(std::string(BOL_ORACLE_DIR) + "/cesaro_bracket.json");
  if (!in) throw Error("cesaro_bracket.json not found");
  return nlohmann::json::parse(in).at("c_min").get<double>();
}

}  // namespace

int main() {
  set_thread_count(4);

  criterion(1, "moment oracle", 1.0, [] {
    double worst_dev = 0.0;
    for (double alpha : {0.0, 0.5, 1.0, 2.5}) {
      const auto rule = product_rule(make_measure(1, alpha), 48);
      for (int k = 0; k <= 8; ++k) {
        const double q = integrate(rule, [k](const Point& z) { return std::pow(z.norm2(), k); });
        worst_dev = std::max(worst_dev, std::abs(q - oracle::disc_moment(k, alpha)));
      }
    }
    return Outcome{worst_dev <= 1e-12, "max |error| " + num(worst_dev)};
  });

  criterion(2, "Cesaro exactness vs 1-D quadrature", 10.0, [] {
    SplitMix64 rng(2024);
    double worst_dev = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const int n = 1 + (i % 2);
      const CesaroSymbol g(random_series(n, 8, rng, true));
      const Series f = random_series(n, 8, rng, false);
      const Point z = random_point(n, rng, 0.999);
      const cplx a = eval(cesaro_apply_exact(g, f), z);
      const cplx b = cesaro_apply_numeric(g, f, z);
      worst_dev = std::max(worst_dev, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
    return Outcome{worst_dev <= 1e-10, "max relative deviation " + num(worst_dev) + " over 1000 triples"};
  });

  criterion(3, "R(T_g f) = f.Rg coefficient-exactly", 5.0, [] {
    SplitMix64 rng(33);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      const int n = 1 + (i % 2);
      const ExactSeries g = random_exact(n, 6, rng, true);
      const ExactSeries f = random_exact(n, 6, rng, false);
      if (!radial_derivative_identity_exact(g.radial_derivative(), f)) ++bad;
    }
    return Outcome{bad == 0, std::to_string(bad) + " mismatches in 1000 rational pairs"};
  });

  criterion(4, "Luxemburg consistency and homogeneity", 5.0, [] {
    SplitMix64 rng(4);
    double dev_p = 0.0, dev_h = 0.0;
    for (int n : {1, 2}) {
      const auto rule = product_rule(make_measure(n, 1.0), n == 1 ? 48 : 24);
      for (int t = 0; t < 4; ++t) {
        const Series f = random_series(n, 5, rng, false);
        const auto v = abs_values(f, rule);
        for (double p : {0.5, 1.0, 2.0, 3.0}) {
          const auto phi = growth::power(p);
          std::vector<double> pw(v.size());
          for (std::size_t i = 0; i < v.size(); ++i) pw[i] = std::pow(v[i], p);
          const double direct = std::pow(integrate_values(rule, pw), 1.0 / p);
          const double lam = luxemburg_from_values(rule, v, phi).lambda_star;
          dev_p = std::max(dev_p, std::abs(lam - direct) / direct);
          for (double c : {0.1, 3.0, 10.0}) {
            const double lc = luxemburg_norm(f.scaled(c), phi, rule).lambda_star;
            dev_h = std::max(dev_h, std::abs(lc - c * lam) / (c * lam));
          }
        }
      }
    }
    return Outcome{dev_p <= 1e-8 && dev_h <= 1e-8,
                   "lambda* vs modular^(1/p) " + num(dev_p) + ", homogeneity " + num(dev_h)};
  });

  criterion(5, "derivative modulars comparable", 120.0, [] {
    HarnessSettings s;
    bool ok = true;
    double drift = 0.0, chain = 0.0, cmax = 0.0;
    for (const char* id : {"power:p=1/2", "power:p=2", "power:p=3", "powerlog:p=2,a=1"})
      for (double alpha : {0.0, 1.0, 2.5}) {
        const auto phi = parse_growth(id);
        const auto mu = make_measure(1, alpha);
        const auto rep = verify_derivative_equivalence(phi, mu, default_family(1, phi, alpha, 1), s);
        ok = ok && rep.verdict == Verdict::pass;
        drift = std::max(drift, rep.constants.at("drift"));
        chain = std::max(chain, rep.constants.at("chain_violation"));
        for (const char* k : {"C_plus", "C_minus", "norm_C_plus", "norm_C_minus"}) {
          const double v = rep.constants.at(k);
          ok = ok && std::isfinite(v);
          cmax = std::max(cmax, v);
        }
      }
    ok = ok && drift <= 0.1 && chain <= 1e-10;
    return Outcome{ok, "12 (phi, alpha) cells, max drift " + num(drift) + ", max chain violation " + num(chain) +
                           ", largest constant " + num(cmax)};
  });

  criterion(6, "Bloch values", 1.0, [] {
    const double oz = oracle::maximize([](double r) { return (1.0 - r * r) * r; }, 0.0, 1.0);
    const double oz2 = oracle::maximize([](double r) { return (1.0 - r * r) * 2.0 * r * r; }, 0.0, 1.0);
    const double mz = bloch_seminorm(CesaroSymbol(Series::coordinate(1, 0))).M;
    const double mz2 = bloch_seminorm(CesaroSymbol(Series::monomial(1, {2}))).M;
    const double d1 = std::abs(mz - oz), d2 = std::abs(mz2 - oz2);
    const bool closed = std::abs(oz - 2.0 / (3.0 * std::sqrt(3.0))) <= 1e-4 && std::abs(oz2 - 0.5) <= 1e-4;
    return Outcome{d1 <= 1e-4 && d2 <= 1e-4 && closed,
                   "M(z) = " + fmt_g(mz) + ", M(z^2) = " + fmt_g(mz2) + ", deviations " + num(d1) + ", " + num(d2)};
  });

  criterion(7, "Cesaro operator bounds", 180.0, [] {
    HarnessSettings s;
    s.c_min = recorded_c_min();
    bool ok = s.c_min > 0.1;
    double worst_upper = 0.0, min_ratio = 1e300, scaling = 0.0;
    const auto symbols = default_symbols(1);
    for (const char* id : {"power:p=1/2", "power:p=2"})
      for (double alpha : {0.0, 1.0}) {
        const auto phi = parse_growth(id);
        auto fam = default_family(1, phi, alpha, 1);
        fam.insert(fam.begin(), FamilyMember{"1", Series::constant(1, 1.0)});
        const auto rep = verify_cesaro_boundedness(symbols, phi, make_measure(1, alpha), fam, s);
        ok = ok && rep.verdict == Verdict::pass;
        for (const auto& c : rep.cases) {
          worst_upper = std::max(worst_upper, c.quantities.at("upper_modular_max"));
          min_ratio = std::min(min_ratio, c.ratios.at("lower/M"));
          scaling = std::max(scaling, c.ratios.at("scaling_deviation"));
        }
      }
    ok = ok && worst_upper <= 1.0 + 1e-6 && min_ratio >= s.c_min && scaling <= 1e-6;
    return Outcome{ok, "max upper modular " + num(worst_upper) + ", min lower/M " + num(min_ratio) + " (c_min " +
                           fmt_g(s.c_min) + "), scaling deviation " + num(scaling)};
  });

  criterion(8, "Cesaro compactness along test functions", 120.0, [] {
    HarnessSettings s;
    bool ok = true;
    std::string detail;
    for (const char* id : {"power:p=2", "power:p=1/2"}) {
      const auto rep = verify_cesaro_compactness({"z", Series::coordinate(1, 0)}, parse_growth(id), make_measure(1, 0.0),
                                                 {0.5, 0.9, 0.99, 0.999}, s);
      ok = ok && rep.verdict == Verdict::pass;
      detail += std::string(detail.empty() ? "" : ", ") + id + " final/max " + num(rep.constants.at("final_over_max"));
    }
    return Outcome{ok, detail};
  });

  criterion(9, "interpolation of powers", 1.0, [] {
    const auto phi = interpolate_growth(growth::power(2), growth::power(4), growth::rho_power(0.5));
    const auto br = ratio_bracket(phi, growth::power(8.0 / 3.0), {1e-6, 1e6, 2048});
    return Outcome{br.constant <= 1.01, "two-sided constant " + fmt_g(br.constant)};
  });

  criterion(10, "growth calculus", 5.0, [] {
    double idx_dev = 0.0;
    for (double p : {1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0, 2.0, 3.0}) {
      const auto ix = indices(growth::power(p));
      idx_dev = std::max({idx_dev, std::abs(ix.a - p), std::abs(ix.b - p)});
    }
    const auto psi = complementary(growth::power(2));
    double comp_dev = 0.0;
    for (double s : log_grid(1e-3, 1e3, 97)) comp_dev = std::max(comp_dev, std::abs(psi(s) - s * s / 4.0) / (s * s / 4.0));
    int mismatches = 0;
    for (const auto& phi : shipped_growth_functions()) {
      const auto r = nabla2_check(phi);
      if (r.verdict != (r.idx.a > 1.0 + kIndexTolerance)) ++mismatches;
    }
    return Outcome{idx_dev <= 1e-6 && comp_dev <= 1e-8 && mismatches == 0,
                   "index deviation " + num(idx_dev) + ", complementary deviation " + num(comp_dev) + ", " +
                       std::to_string(mismatches) + " nabla2 mismatches"};
  });

  criterion(11, "deterministic reports", 0.0, [] {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / ("bol_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(root);
    const fs::path cfg = root / "config.json";
    std::ofstream(cfg) << R"({"schema": "bol-config/1", "n": 1, "alpha": [0, 1], "phi": ["power:p=2", "power:p=1/2"],
      "quadrature": {"degree": 32}, "seed": 11,
      "suites": ["derivative_equivalence", "pointwise_estimates", "test_functions", "cesaro_boundedness",
                 "cesaro_compactness", "interpolation_power", "small_type"]})";
    std::vector<std::string> texts;
    for (const char* threads : {"1", "4", "4"}) {
      const fs::path out = root / (std::string("out") + std::to_string(texts.size()));
      const std::string c = cfg.string(), o = out.string();
      const char* argv[] = {"bol", "verify", "--config", c.c_str(), "--threads", threads, "--out", o.c_str()};
      std::ostringstream sout, serr;
      cli::run(8, argv, sout, serr);
      std::string all;
      for (const auto& s : known_suites()) {
        std::ifstream in(out / (s + ".json"), std::ios::binary);
        all += std::string(std::istreambuf_iterator<char>(in), {});
      }
      texts.push_back(all);
    }
    fs::remove_all(root);
    const bool ok = !texts[0].empty() && texts[0] == texts[1] && texts[1] == texts[2];
    return Outcome{ok, std::to_string(texts[0].size()) + " bytes across 7 suites, threads 1 / 4 / 4"};
  });

  set_thread_count(1);
  std::printf("%s: %d of 11 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
