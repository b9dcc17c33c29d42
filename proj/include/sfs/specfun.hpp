#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfs/indexing.hpp"

namespace sfs {

using Complex = std::complex<double>;

namespace detail {

inline double checked_theta(double theta) {
  constexpr double slack = 1e-9;
  if (!(theta >= -slack && theta <= std::numbers::pi + slack))
    throw std::invalid_argument("spherical_harmonic: theta outside [0, pi]");
  return std::clamp(theta, 0.0, std::numbers::pi);
}

// Fully normalized associated Legendre values Pbar_n^m(cos theta) for a fixed
// m >= 0 and n = m..N, such that Y_n^m = Pbar_n^m e^{i m phi}. The Condon-
// Shortley phase is carried by the diagonal recurrence's minus sign.
inline void normalized_legendre_column(int m, int N, double ct, double st,
                                       std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(N - m + 1), 0.0);
  double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  for (int q = 1; q <= m; ++q)
    pmm *= -std::sqrt((2.0 * q + 1.0) / (2.0 * q)) * st;
  out[0] = pmm;
  if (N == m) return;
  double pm1 = std::sqrt(2.0 * m + 3.0) * ct * pmm;
  out[1] = pm1;
  for (int n = m + 2; n <= N; ++n) {
    const double a = std::sqrt((4.0 * n * n - 1.0) / (static_cast<double>(n) * n - static_cast<double>(m) * m));
    const double b = std::sqrt((static_cast<double>(n - 1) * (n - 1) - static_cast<double>(m) * m) /
                               (4.0 * static_cast<double>(n - 1) * (n - 1) - 1.0));
    const double pn = a * (ct * pm1 - b * pmm);
    out[static_cast<std::size_t>(n - m)] = pn;
    pmm = pm1;
    pm1 = pn;
  }
}

}  // namespace detail

// Orthonormal spherical harmonic Y_n^m(theta, phi) with Condon-Shortley phase.
inline Complex spherical_harmonic(OrderDegree nm, double theta, double phi) {
  theta = detail::checked_theta(theta);
  const int ma = std::abs(nm.m);
  const double ct = std::cos(theta), st = std::sin(theta);
  std::vector<double> col;
  detail::normalized_legendre_column(ma, nm.n, ct, st, col);
  const double p = col.back();
  const Complex y = p * std::polar(1.0, ma * phi);
  if (nm.m >= 0) return y;
  return (ma % 2 == 0) ? std::conj(y) : -std::conj(y);
}

// All Y_n^m for n <= N at one direction, in modal_flat order.
inline std::vector<Complex> spherical_harmonic_table(int N, double theta, double phi) {
  theta = detail::checked_theta(theta);
  const double ct = std::cos(theta), st = std::sin(theta);
  std::vector<Complex> table(static_cast<std::size_t>(modal_count(N)));
  std::vector<double> col;
  for (int m = 0; m <= N; ++m) {
    detail::normalized_legendre_column(m, N, ct, st, col);
    const Complex e = std::polar(1.0, m * phi);
    for (int n = m; n <= N; ++n) {
      const Complex y = col[static_cast<std::size_t>(n - m)] * e;
      table[static_cast<std::size_t>(modal_flat(n, m))] = y;
      if (m > 0) {
        const Complex ym = (m % 2 == 0) ? std::conj(y) : -std::conj(y);
        table[static_cast<std::size_t>(modal_flat(n, -m))] = ym;
      }
    }
  }
  return table;
}

namespace detail {

inline void check_bessel_args(int n, double x, const char* who) {
  if (n < 0) throw std::invalid_argument(std::string(who) + ": negative order");
  if (!(x > 0.0)) throw std::invalid_argument(std::string(who) + ": require x > 0");
}

}  // namespace detail

// j_0..j_N by Miller downward recurrence, normalized with the closure
// sum_{q>=0} (2q+1) j_q(x)^2 = 1. Downward is required for stability at
// n > x; the closure avoids dividing by j_0 near its zeros. The start order
// sits well above both N and the n ~ x transition region (whose width grows
// like x^{1/3}), where the minimal solution has not yet separated.
inline std::vector<double> spherical_bessel_j_table(int N, double x) {
  detail::check_bessel_args(N, x, "spherical_bessel_j_table");
  const int start = N + static_cast<int>(std::ceil(x)) + 30 +
                    4 * static_cast<int>(std::ceil(std::cbrt(x)));
  std::vector<long double> raw(static_cast<std::size_t>(N + 1), 0.0L);
  const long double invx = 1.0L / static_cast<long double>(x);
  long double jnext = 0.0L;   // j_{q+1}
  long double jcur = 1e-30L;  // seed at q = start (> N always)
  long double closure = (2.0L * start + 1.0L) * jcur * jcur;
  for (int q = start; q >= 1; --q) {
    const long double jprev = (2.0L * q + 1.0L) * invx * jcur - jnext;
    jnext = jcur;
    jcur = jprev;
    closure += (2.0L * (q - 1) + 1.0L) * jcur * jcur;
    if (q - 1 <= N) raw[static_cast<std::size_t>(q - 1)] = jcur;
    if (std::fabs(static_cast<double>(jcur)) > 1e250) {
      const long double s = 1e-250L;
      jcur *= s;
      jnext *= s;
      closure *= s * s;
      for (auto& v : raw) v *= s;
    }
  }
  const long double scale = 1.0L / std::sqrt(closure);
  std::vector<double> j(static_cast<std::size_t>(N + 1));
  for (int q = 0; q <= N; ++q)
    j[static_cast<std::size_t>(q)] = static_cast<double>(raw[static_cast<std::size_t>(q)] * scale);
  return j;
}

inline double spherical_bessel_j(int n, double x) {
  return spherical_bessel_j_table(n, x)[static_cast<std::size_t>(n)];
}

// y_0..y_N by upward recurrence (stable for the irregular solution).
inline std::vector<double> spherical_bessel_y_table(int N, double x) {
  detail::check_bessel_args(N, x, "spherical_bessel_y_table");
  std::vector<double> y(static_cast<std::size_t>(N + 1));
  const long double invx = 1.0L / static_cast<long double>(x);
  long double ym = -std::cos(static_cast<long double>(x)) * invx;
  y[0] = static_cast<double>(ym);
  if (N == 0) return y;
  long double yc = (ym - std::sin(static_cast<long double>(x))) * invx;
  y[1] = static_cast<double>(yc);
  for (int q = 1; q < N; ++q) {
    const long double yn = (2.0L * q + 1.0L) * invx * yc - ym;
    ym = yc;
    yc = yn;
    y[static_cast<std::size_t>(q + 1)] = static_cast<double>(yn);
  }
  return y;
}

inline double spherical_bessel_y(int n, double x) {
  return spherical_bessel_y_table(n, x)[static_cast<std::size_t>(n)];
}

// Outgoing spherical Hankel function h_n^{(1)}(x) = j_n(x) + i y_n(x).
inline std::vector<Complex> spherical_hankel1_table(int N, double x) {
  const auto j = spherical_bessel_j_table(N, x);
  const auto y = spherical_bessel_y_table(N, x);
  std::vector<Complex> h(static_cast<std::size_t>(N + 1));
  for (int q = 0; q <= N; ++q) h[static_cast<std::size_t>(q)] = Complex(j[q], y[q]);
  return h;
}

inline Complex spherical_hankel1(int n, double x) {
  detail::check_bessel_args(n, x, "spherical_hankel1");
  return Complex(spherical_bessel_j(n, x), spherical_bessel_y(n, x));
}

// dh_n/dx from h_n' = h_{n-1} - ((n+1)/x) h_n, with h_{-1} = i h_0. This is
// the argument derivative; a caller expanding in kr applies the chain-rule
// factor k itself.
inline std::vector<Complex> spherical_hankel1_deriv_table(int N, double x) {
  const auto h = spherical_hankel1_table(N, x);
  std::vector<Complex> hp(static_cast<std::size_t>(N + 1));
  hp[0] = Complex(0.0, 1.0) * h[0] - h[0] / x;
  for (int n = 1; n <= N; ++n)
    hp[static_cast<std::size_t>(n)] = h[static_cast<std::size_t>(n - 1)] - (n + 1.0) / x * h[static_cast<std::size_t>(n)];
  return hp;
}

inline Complex spherical_hankel1_deriv(int n, double x) {
  detail::check_bessel_args(n, x, "spherical_hankel1_deriv");
  return spherical_hankel1_deriv_table(n, x)[static_cast<std::size_t>(n)];
}

}  // namespace sfs
