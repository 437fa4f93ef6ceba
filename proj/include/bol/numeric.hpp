#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <thread>
#include <vector>

#include "bol/error.hpp"

namespace bol {

// ---------------------------------------------------------------------------
// Parallel evaluation. Work is split into contiguous chunks that write into
// preallocated slots, so results never depend on the thread count.

namespace detail {
inline std::atomic<int>& thread_count_storage() {
  static std::atomic<int> count{1};
  return count;
}
}  // namespace detail

inline void set_thread_count(int n) { detail::thread_count_storage() = std::max(1, n); }
inline int thread_count() { return detail::thread_count_storage().load(); }

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
  if (threads <= 1 || count < 256) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
}

/// Pairwise (cascade) summation in a fixed order.
template <class T>
T pairwise_sum(std::span<const T> xs) {
  if (xs.size() <= 16) {
    T s{};
    for (const auto& x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& xs) {
  return pairwise_sum(std::span<const T>(xs));
}

// ---------------------------------------------------------------------------
// Grids and one-dimensional solvers.

struct GridSpec {
  double lo = 1e-8;
  double hi = 1e8;
  int points = 2048;
};

inline std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) throw ParameterError("log_grid: need 0 < lo < hi, points >= 2");
  std::vector<double> g(static_cast<std::size_t>(points));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i) g[i] = std::exp(a + (b - a) * i / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

inline std::vector<double> log_grid(const GridSpec& spec) { return log_grid(spec.lo, spec.hi, spec.points); }

struct Extremum {
  double x;
  double value;
};

/// Golden-section search for the maximum of a unimodal f on [a, b].
template <class F>
Extremum golden_section_max(F&& f, double a, double b, double xtol = 1e-12, int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && std::abs(b - a) > xtol * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
}

template <class F>
Extremum golden_section_min(F&& f, double a, double b, double xtol = 1e-12, int max_iter = 200) {
  auto r = golden_section_max([&](double x) { return -f(x); }, a, b, xtol, max_iter);
  return {r.x, -r.value};
}

inline constexpr double kOverflowBound = 1e300;

/// Solve F(x) = target for x ≥ 0, F non-decreasing with F(0) = 0, by geometric
/// bracket expansion from x = 1 followed by bisection in log x.
template <class F>
double solve_increasing(F&& f, double target, double rtol = 4e-16) {
  if (target < 0.0 || std::isnan(target)) throw DomainError("solve_increasing: negative target");
  if (target == 0.0) return 0.0;
  double lo = 1.0, hi = 1.0;
  double fhi = f(hi);
  if (fhi < target) {
    while (fhi < target) {
      lo = hi;
      hi *= 16.0;
      if (hi > kOverflowBound) throw UnboundedInverseError("inverse not bracketed below overflow bound");
      fhi = f(hi);
    }
  } else {
    double flo = fhi;
    while (flo >= target) {
      hi = lo;
      lo /= 16.0;
      if (lo < 1e-300) return 0.0;
      flo = f(lo);
    }
  }
  for (int i = 0; i < 400 && hi - lo > rtol * hi; ++i) {
    const double mid = (hi / lo > 4.0) ? std::sqrt(lo) * std::sqrt(hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Deterministic random numbers: splitmix64 state with explicit conversions, so
// sequences are identical across standard library implementations.

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) noexcept { return a + (b - a) * uniform(); }
  int uniform_int(int lo, int hi) noexcept {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

/// Radical inverse of i in the given prime base (Halton coordinate).
inline double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

inline constexpr unsigned kHaltonPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

inline double relative_drift(double a, double b) {
  if (a == b) return 0.0;
  const double scale = std::max(std::abs(a), std::abs(b));
  if (!std::isfinite(scale)) return std::numeric_limits<double>::infinity();
  return std::abs(a - b) / scale;
}

}  // namespace bol
