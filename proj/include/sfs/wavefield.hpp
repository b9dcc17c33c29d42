#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sfs/gaunt.hpp"
#include "sfs/indexing.hpp"
#include "sfs/specfun.hpp"

namespace sfs {

struct Medium {
  double sound_speed = 343.0;   // m/s
  double density = 1.293;       // kg/m^3

  Medium() = default;
  Medium(double c, double rho) : sound_speed(c), density(rho) {
    if (!(c > 0.0) || !(rho > 0.0))
      throw std::invalid_argument("Medium: sound speed and density must be positive");
  }

  double wavenumber(double frequency_hz) const {
    return 2.0 * std::numbers::pi * frequency_hz / sound_speed;
  }
};

struct PointSource {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

// Complex source weights for one frequency, one entry per secondary source.
using DrivingSignals = Eigen::VectorXcd;

// Exterior expansion u(r) = sum coeffs[n,m] h_n(k|r-origin|) Y_n^m, valid for
// |r - origin| > validity_radius. The origin and validity radius travel with
// the coefficients so an expansion cannot silently be evaluated too close or
// mixed with one about a different center.
struct SphericalSpectrum {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  int max_order = 0;
  Eigen::VectorXcd coeffs;
  double validity_radius = 0.0;

  SphericalSpectrum() : coeffs(Eigen::VectorXcd::Zero(1)) {}
  SphericalSpectrum(const Eigen::Vector3d& origin_, int max_order_,
                    Eigen::VectorXcd coeffs_, double validity_radius_ = 0.0)
      : origin(origin_), max_order(max_order_), coeffs(std::move(coeffs_)),
        validity_radius(validity_radius_) {
    if (coeffs.size() != modal_count(max_order))
      throw std::invalid_argument("SphericalSpectrum: coefficient count != (N+1)^2");
  }

  static SphericalSpectrum zero(const Eigen::Vector3d& origin_, int max_order_) {
    return SphericalSpectrum(origin_, max_order_,
                             Eigen::VectorXcd::Zero(modal_count(max_order_)));
  }

  Complex at(int n, int m) const { return coeffs(ModalIndexMap(max_order).flat(n, m)); }
};

namespace detail {

struct Spherical {
  double r, theta, phi;
};

inline Spherical to_spherical(const Eigen::Vector3d& v) {
  const double rho = std::hypot(v.x(), v.y());
  return {v.norm(), std::atan2(rho, v.z()), std::atan2(v.y(), v.x())};
}

inline Complex ipow(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace detail

// Free-space transfer function of a monopole: e^{ik|r-r_l|} / (4 pi |r-r_l|),
// outgoing under the e^{-i omega t} convention shared by h_n^{(1)}.
inline Complex greens_function(const PointSource& src, const Eigen::Vector3d& r, double k) {
  const double d = (r - src.position).norm();
  if (d < 1e-12) throw std::invalid_argument("greens_function: evaluation at the source point");
  return std::polar(1.0 / (4.0 * std::numbers::pi * d), k * d);
}

// Expansion of the monopole about its own position: a single n = 0 mode with
// coefficient ik / sqrt(4 pi), since h_0(x) = -i e^{ix} / x.
inline SphericalSpectrum point_source_self_spectrum(const PointSource& src, double k) {
  Eigen::VectorXcd c(1);
  c(0) = Complex(0.0, k / std::sqrt(4.0 * std::numbers::pi));
  return SphericalSpectrum(src.position, 0, std::move(c), 0.0);
}

// Exterior-to-exterior translation coefficient S_{nu,n}^{mu,m}(b): the (nu,mu)
// exterior wavefunction about an old center contributes S times the (n,m)
// exterior wavefunction about the new center, for field points farther from
// the new center than |b|, b = new center - old center.
//
//   S = 4 pi i^{n-nu} sum_q i^q (-1)^mu j_q(k|b|) Y_q^{m-mu}(b)^* G(nu,mu; n,-m; q)
//
// with q running over |nu-n| .. nu+n in steps of two (Gaunt parity).
inline Complex translation_operator(OrderDegree nu_mu, OrderDegree nm,
                                    const Eigen::Vector3d& displacement, double k) {
  const auto sph = detail::to_spherical(displacement);
  if (sph.r <= 0.0) throw std::invalid_argument("translation_operator: zero displacement");
  const int nu = nu_mu.n, mu = nu_mu.m, n = nm.n, m = nm.m;
  const int qmax = nu + n;
  const auto jq = spherical_bessel_j_table(qmax, k * sph.r);
  const auto ytab = spherical_harmonic_table(qmax, sph.theta, sph.phi);

  int qmin = std::max(std::abs(nu - n), std::abs(m - mu));
  if ((nu + n + qmin) % 2 != 0) ++qmin;
  Complex sum = 0.0;
  for (int q = qmin; q <= qmax; q += 2) {
    const double g = gaunt(OrderDegree(nu, mu), OrderDegree(n, -m), q);
    if (g == 0.0) continue;
    sum += detail::ipow(q) * jq[static_cast<std::size_t>(q)] *
           std::conj(ytab[static_cast<std::size_t>(modal_flat(q, m - mu))]) * g;
  }
  const double musign = (mu % 2 == 0) ? 1.0 : -1.0;
  return 4.0 * std::numbers::pi * detail::ipow(n - nu) * musign * sum;
}

// Dense translation matrix T with T((n,m),(nu,mu)) = S_{nu,n}^{mu,m}(b); new
// coefficients are T * old coefficients. Bessel and harmonic tables for the
// displacement are shared across all entries.
inline Eigen::MatrixXcd translation_matrix(int old_order, int new_order,
                                           const Eigen::Vector3d& displacement, double k) {
  const auto sph = detail::to_spherical(displacement);
  if (sph.r <= 0.0) throw std::invalid_argument("translation_matrix: zero displacement");
  const int qmax = old_order + new_order;
  const auto jq = spherical_bessel_j_table(qmax, k * sph.r);
  const auto ytab = spherical_harmonic_table(qmax, sph.theta, sph.phi);

  Eigen::MatrixXcd T(modal_count(new_order), modal_count(old_order));
  for (int nu = 0; nu <= old_order; ++nu) {
    for (int mu = -nu; mu <= nu; ++mu) {
      const double musign = (mu % 2 == 0) ? 1.0 : -1.0;
      for (int n = 0; n <= new_order; ++n) {
        for (int m = -n; m <= n; ++m) {
          int qmin = std::max(std::abs(nu - n), std::abs(m - mu));
          if ((nu + n + qmin) % 2 != 0) ++qmin;
          Complex sum = 0.0;
          for (int q = qmin; q <= nu + n; q += 2) {
            const double g = gaunt(OrderDegree(nu, mu), OrderDegree(n, -m), q);
            if (g == 0.0) continue;
            sum += detail::ipow(q) * jq[static_cast<std::size_t>(q)] *
                   std::conj(ytab[static_cast<std::size_t>(modal_flat(q, m - mu))]) * g;
          }
          T(modal_flat(n, m), modal_flat(nu, mu)) =
              4.0 * std::numbers::pi * detail::ipow(n - nu) * musign * sum;
        }
      }
    }
  }
  return T;
}

// Re-expands an exterior spectrum about a new origin. The result is valid
// outside |new origin - old origin| + the old validity radius.
inline SphericalSpectrum translate_spectrum(const SphericalSpectrum& spec,
                                            const Eigen::Vector3d& new_origin,
                                            int new_max_order, double k) {
  const Eigen::Vector3d shift = new_origin - spec.origin;
  if (shift.norm() <= 0.0)
    throw std::invalid_argument("translate_spectrum: coincident origins");
  const Eigen::MatrixXcd T = translation_matrix(spec.max_order, new_max_order, shift, k);
  return SphericalSpectrum(new_origin, new_max_order, T * spec.coeffs,
                           shift.norm() + spec.validity_radius);
}

inline void check_exterior_point(const SphericalSpectrum& spec, double r) {
  if (!(r > spec.validity_radius) || r <= 0.0)
    throw std::domain_error("spectrum evaluated inside its validity radius");
}

// Partial sum of the exterior expansion at r.
inline Complex evaluate_exterior(const SphericalSpectrum& spec, const Eigen::Vector3d& r,
                                 double k) {
  const auto sph = detail::to_spherical(r - spec.origin);
  check_exterior_point(spec, sph.r);
  const auto h = spherical_hankel1_table(spec.max_order, k * sph.r);
  const auto ytab = spherical_harmonic_table(spec.max_order, sph.theta, sph.phi);
  Complex u = 0.0;
  for (int n = 0; n <= spec.max_order; ++n)
    for (int m = -n; m <= n; ++m)
      u += spec.coeffs(modal_flat(n, m)) * h[static_cast<std::size_t>(n)] *
           ytab[static_cast<std::size_t>(modal_flat(n, m))];
  return u;
}

// d/dr of the exterior expansion at r (analytic, k h_n' chain rule).
inline Complex evaluate_exterior_radial_derivative(const SphericalSpectrum& spec,
                                                   const Eigen::Vector3d& r, double k) {
  const auto sph = detail::to_spherical(r - spec.origin);
  check_exterior_point(spec, sph.r);
  const auto hp = spherical_hankel1_deriv_table(spec.max_order, k * sph.r);
  const auto ytab = spherical_harmonic_table(spec.max_order, sph.theta, sph.phi);
  Complex du = 0.0;
  for (int n = 0; n <= spec.max_order; ++n)
    for (int m = -n; m <= n; ++m)
      du += spec.coeffs(modal_flat(n, m)) * (k * hp[static_cast<std::size_t>(n)]) *
            ytab[static_cast<std::size_t>(modal_flat(n, m))];
  return du;
}

// Column l holds the expansion coefficients of source l about `center`
// through order N: the monopole self-spectrum pushed through the translation
// operator (or zero-padded if the source already sits at the center).
inline Eigen::MatrixXcd source_spectrum_matrix(const std::vector<PointSource>& sources,
                                               const Eigen::Vector3d& center, int N,
                                               double k) {
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(modal_count(N), static_cast<Eigen::Index>(sources.size()));
  for (std::size_t l = 0; l < sources.size(); ++l) {
    const SphericalSpectrum self = point_source_self_spectrum(sources[l], k);
    if ((center - sources[l].position).norm() <= 0.0) {
      C(0, static_cast<Eigen::Index>(l)) = self.coeffs(0);
    } else {
      const SphericalSpectrum moved = translate_spectrum(self, center, N, k);
      C.col(static_cast<Eigen::Index>(l)) = moved.coeffs;
    }
  }
  return C;
}

// Exterior spectrum of sum_l d_l g_l about `center`.
inline SphericalSpectrum synthesized_spectrum(const std::vector<PointSource>& sources,
                                              const Eigen::VectorXcd& d,
                                              const Eigen::Vector3d& center, int N,
                                              double k) {
  if (d.size() != static_cast<Eigen::Index>(sources.size()))
    throw std::invalid_argument("synthesized_spectrum: driving-signal length != source count");
  const Eigen::MatrixXcd C = source_spectrum_matrix(sources, center, N, k);
  double validity = 0.0;
  for (const auto& s : sources)
    validity = std::max(validity, (s.position - center).norm());
  return SphericalSpectrum(center, N, C * d, validity);
}

}  // namespace sfs
