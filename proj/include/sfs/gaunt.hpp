#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

#include "sfs/indexing.hpp"

namespace sfs {

namespace detail {

inline constexpr int kMaxFactorial = 400;

inline const std::array<long double, kMaxFactorial + 1>& factorial_table() {
  static const std::array<long double, kMaxFactorial + 1> table = [] {
    std::array<long double, kMaxFactorial + 1> t{};
    t[0] = 1.0L;
    for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table;
}

inline long double fact(int n) {
  if (n < 0 || n > kMaxFactorial)
    throw std::domain_error("wigner3j: factorial argument out of table range");
  return factorial_table()[static_cast<std::size_t>(n)];
}

}  // namespace detail

// Wigner 3j symbol by the Racah single-sum formula, evaluated in extended
// precision. Adequate through orders of a few tens; larger orders trip the
// factorial-table guard rather than returning a silently inaccurate value.
inline double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (m1 + m2 + m3 != 0) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;

  using detail::fact;
  const long double delta =
      std::sqrt(fact(j1 + j2 - j3) * fact(j1 - j2 + j3) * fact(-j1 + j2 + j3) /
                fact(j1 + j2 + j3 + 1));
  const long double pref =
      std::sqrt(fact(j1 + m1) * fact(j1 - m1) * fact(j2 + m2) * fact(j2 - m2) *
                fact(j3 + m3) * fact(j3 - m3));

  const int tmin = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int tmax = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  long double sum = 0.0L;
  for (int t = tmin; t <= tmax; ++t) {
    const long double term =
        1.0L / (fact(t) * fact(j3 - j2 + t + m1) * fact(j3 - j1 + t - m2) *
                fact(j1 + j2 - j3 - t) * fact(j1 - t - m1) * fact(j2 - t + m2));
    sum += (t % 2 == 0) ? term : -term;
  }
  const int phase = j1 - j2 - m3;
  const long double sign = (((phase % 2) + 2) % 2 == 0) ? 1.0L : -1.0L;
  return static_cast<double>(sign * delta * pref * sum);
}

// Gaunt coefficient G(n,m; nu,mu; q) = Int Y_n^m Y_nu^mu (Y_q^{m+mu})* dOmega.
// Exactly zero outside the selection rules: triangle |n-nu| <= q <= n+nu,
// even n+nu+q, and |m+mu| <= q.
inline double gaunt(OrderDegree nm1, OrderDegree nm2, int q) {
  const int n = nm1.n, m = nm1.m, nu = nm2.n, mu = nm2.m;
  if (q < 0) throw std::invalid_argument("gaunt: negative q");
  if (q < std::abs(n - nu) || q > n + nu) return 0.0;
  if ((n + nu + q) % 2 != 0) return 0.0;
  if (std::abs(m + mu) > q) return 0.0;
  const double norm = std::sqrt((2.0 * n + 1.0) * (2.0 * nu + 1.0) * (2.0 * q + 1.0) /
                                (4.0 * std::numbers::pi));
  const double w0 = wigner3j(n, nu, q, 0, 0, 0);
  const double wm = wigner3j(n, nu, q, m, mu, -(m + mu));
  const double sign = ((m + mu) % 2 == 0) ? 1.0 : -1.0;
  return sign * norm * w0 * wm;
}

// Read-mostly concurrent memo for Gaunt coefficients; keys pack the full
// index tuple. Used where the same small index set is looked up repeatedly
// (kernel assembly across a frequency grid).
class GauntCache {
 public:
  double get(OrderDegree nm1, OrderDegree nm2, int q) const {
    const std::uint64_t key = pack(nm1, nm2, q);
    {
      std::shared_lock lock(mutex_);
      if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    const double value = gaunt(nm1, nm2, q);
    std::unique_lock lock(mutex_);
    map_.emplace(key, value);
    return value;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
  }

 private:
  static std::uint64_t pack(OrderDegree a, OrderDegree b, int q) {
    const auto u = [](int v) { return static_cast<std::uint64_t>(v + 512) & 0xFFFu; };
    return (u(a.n) << 48) | (u(a.m) << 36) | (u(b.n) << 24) | (u(b.m) << 12) | u(q);
  }

  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::uint64_t, double> map_;
};

}  // namespace sfs
