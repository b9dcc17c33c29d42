#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sfs/gaunt.hpp"
#include "sfs/quadrature.hpp"
#include "sfs/specfun.hpp"
#include "sfs/wavefield.hpp"

namespace sfs {

struct BoundingSphere {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 1.0;

  BoundingSphere() = default;
  BoundingSphere(const Eigen::Vector3d& c, double r) : center(c), radius(r) {
    if (!(r > 0.0)) throw std::invalid_argument("BoundingSphere: radius must be positive");
  }
};

// Nonnegative angular weighting w(theta, phi) prioritizing suppression
// directions, held as spherical-harmonic coefficients plus (when available)
// the closed form it came from. Nonnegativity is checked on a dense angular
// sample at construction.
class DirectionalWeight {
 public:
  using AngularFn = std::function<double(double, double)>;

  DirectionalWeight() : DirectionalWeight(uniform()) {}

  static DirectionalWeight uniform() {
    Eigen::VectorXcd c(1);
    c(0) = std::sqrt(4.0 * std::numbers::pi);
    return DirectionalWeight(0, std::move(c), "uniform",
                             [](double, double) { return 1.0; });
  }

  // w = 1 + axis . r_hat; equals 1 + cos(phi) sin(theta) for axis = +x.
  static DirectionalWeight one_plus_cardioid(const Eigen::Vector3d& axis) {
    const double norm = axis.norm();
    if (!(norm > 0.0))
      throw std::invalid_argument("DirectionalWeight: zero cardioid axis");
    const Eigen::Vector3d a = axis / norm;
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(4);
    const double s2 = std::sqrt(2.0 * std::numbers::pi / 3.0);
    c(modal_flat(0, 0)) = std::sqrt(4.0 * std::numbers::pi);
    c(modal_flat(1, -1)) = Complex(a.x(), a.y()) * s2;
    c(modal_flat(1, 0)) = a.z() * std::sqrt(4.0 * std::numbers::pi / 3.0);
    c(modal_flat(1, 1)) = Complex(-a.x(), a.y()) * s2;
    return DirectionalWeight(1, std::move(c), "one_plus_cardioid",
                             [a](double theta, double phi) {
                               const Eigen::Vector3d rhat(std::sin(theta) * std::cos(phi),
                                                          std::sin(theta) * std::sin(phi),
                                                          std::cos(theta));
                               return 1.0 + a.dot(rhat);
                             });
  }

  // Quadrature projection of an arbitrary angular function onto orders
  // <= max_order. Throws if the residual shows the function is not
  // representable at the requested order.
  static DirectionalWeight from_function(const AngularFn& fn, int max_order,
                                         const std::string& name,
                                         double residual_tol = 1e-8) {
    if (max_order < 0)
      throw std::invalid_argument("DirectionalWeight: negative max order");
    const int nt = 2 * (max_order + 8), np = 4 * (max_order + 8);
    const SphereQuadrature rule = full_sphere_rule(nt, np);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(modal_count(max_order));
    for (std::size_t i = 0; i < rule.theta.size(); ++i) {
      const auto ytab = spherical_harmonic_table(max_order, rule.theta[i], 0.0);
      for (std::size_t j = 0; j < rule.phi.size(); ++j) {
        const double wf = rule.wtheta[i] * rule.wphi[j] * fn(rule.theta[i], rule.phi[j]);
        for (int n = 0; n <= max_order; ++n)
          for (int m = -n; m <= n; ++m)
            c(modal_flat(n, m)) += wf * std::conj(ytab[static_cast<std::size_t>(modal_flat(n, m))] *
                                                  std::polar(1.0, m * rule.phi[j]));
      }
    }
    DirectionalWeight w(max_order, std::move(c), name, fn);
    double max_residual = 0.0;
    for (double theta = 0.05; theta < std::numbers::pi; theta += 0.21)
      for (double phi = 0.0; phi < 2.0 * std::numbers::pi; phi += 0.17)
        max_residual = std::max(max_residual, std::fabs(w.reconstruct(theta, phi) - fn(theta, phi)));
    if (max_residual > residual_tol)
      throw std::invalid_argument("DirectionalWeight: projection residual " +
                                  std::to_string(max_residual) + " above tolerance");
    return w;
  }

  static DirectionalWeight from_spectrum(int max_order, Eigen::VectorXcd coeffs,
                                         const std::string& name) {
    return DirectionalWeight(max_order, std::move(coeffs), name, nullptr);
  }

  int max_order() const { return max_order_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  const std::string& description() const { return description_; }

  double evaluate(double theta, double phi) const {
    if (closed_form_) return closed_form_(theta, phi);
    return reconstruct(theta, phi);
  }

  // sum w~_n^m Y_n^m; real up to rounding for a real weight.
  double reconstruct(double theta, double phi) const {
    const auto ytab = spherical_harmonic_table(max_order_, theta, phi);
    Complex v = 0.0;
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i)
      v += coeffs_(i) * ytab[static_cast<std::size_t>(i)];
    return v.real();
  }

 private:
  DirectionalWeight(int max_order, Eigen::VectorXcd coeffs, std::string description,
                    AngularFn closed_form)
      : max_order_(max_order), coeffs_(std::move(coeffs)),
        description_(std::move(description)), closed_form_(std::move(closed_form)) {
    if (coeffs_.size() != modal_count(max_order_))
      throw std::invalid_argument("DirectionalWeight: coefficient count != (N+1)^2");
    check_nonnegative();
  }

  void check_nonnegative() const {
    double min_value = std::numeric_limits<double>::infinity();
    const int nt = std::max(32, 8 * (max_order_ + 1));
    const int np = 2 * nt;
    for (int i = 0; i <= nt; ++i) {
      const double theta = std::numbers::pi * i / nt;
      for (int j = 0; j < np; ++j)
        min_value = std::min(min_value, evaluate(theta, 2.0 * std::numbers::pi * j / np));
    }
    if (min_value < -1e-9)
      throw std::invalid_argument("DirectionalWeight: weight is negative (min sampled " +
                                  std::to_string(min_value) + ")");
  }

  int max_order_;
  Eigen::VectorXcd coeffs_;
  std::string description_;
  AngularFn closed_form_;
};

// Coefficients w~_n^m of the weight, packaged as an angular spectrum.
inline SphericalSpectrum weight_spectrum(const DirectionalWeight& w) {
  return SphericalSpectrum(Eigen::Vector3d::Zero(), w.max_order(), w.coeffs(), 0.0);
}

// Hermitian kernel K over flat modal indices such that the directionally
// weighted exterior radiation power of an exterior spectrum u is u^H K u.
//
// Derivation: the radial intensity (1/2) Re[u (i/rho c k) du*/dr] integrated
// over the sphere with weight w reduces, with x = kR and the chain-rule k on
// the radial derivative applied here (and nowhere else), to
//
//   E = -(R^2 / (2 rho c k)) Im[ sum w~_nu^mu  u_n^m (u_{n'}^{m'})*
//                                h_n(x) (k h_{n'}'(x))* G(n,m; nu,mu; n') ]
//
// restricted to m' = m + mu, |n-nu| <= n' <= n+nu (Gaunt selection). For the
// uniform weight this collapses to the Wronskian diagonal 1/(2 rho c k^2).
// Taking the anti-Hermitian part makes u^H K u exactly real:
// Im[u^H M u] = u^H (M - M^H)/(2i) u.
inline Eigen::MatrixXcd assemble_kernel(const SphericalSpectrum& weight,
                                        const BoundingSphere& sphere, int N, double k,
                                        const Medium& medium,
                                        const GauntCache* cache = nullptr) {
  if (N < 0) throw std::invalid_argument("assemble_kernel: negative truncation order");
  const double x = k * sphere.radius;
  if (!(x > 0.0)) throw std::invalid_argument("assemble_kernel: require k R > 0");
  const int sz = modal_count(N);
  const auto h = spherical_hankel1_table(N, x);
  const auto hp = spherical_hankel1_deriv_table(N, x);

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(sz, sz);
  for (int n = 0; n <= N; ++n) {
    for (int m = -n; m <= n; ++m) {
      const int col = modal_flat(n, m);
      for (int nu = 0; nu <= weight.max_order; ++nu) {
        for (int mu = -nu; mu <= nu; ++mu) {
          const Complex wc = weight.coeffs(modal_flat(nu, mu));
          if (wc == Complex(0.0, 0.0)) continue;
          const int mp = m + mu;
          int np0 = std::max(std::abs(n - nu), std::abs(mp));
          if ((n + nu + np0) % 2 != 0) ++np0;
          for (int np = np0; np <= std::min(n + nu, N); np += 2) {
            const double g = cache ? cache->get(OrderDegree(n, m), OrderDegree(nu, mu), np)
                                   : gaunt(OrderDegree(n, m), OrderDegree(nu, mu), np);
            if (g == 0.0) continue;
            M(modal_flat(np, mp), col) +=
                wc * h[static_cast<std::size_t>(n)] *
                std::conj(k * hp[static_cast<std::size_t>(np)]) * g;
          }
        }
      }
    }
  }

  const double scale = -sphere.radius * sphere.radius /
                       (2.0 * medium.density * medium.sound_speed * k);
  Eigen::MatrixXcd K(sz, sz);
  for (int i = 0; i < sz; ++i) {
    K(i, i) = Complex(scale * M(i, i).imag(), 0.0);
    for (int jj = i + 1; jj < sz; ++jj) {
      const Complex kij = scale * (M(i, jj) - std::conj(M(jj, i))) * Complex(0.0, -0.5);
      K(i, jj) = kij;
      K(jj, i) = std::conj(kij);
    }
  }
  return K;
}

// Radiation-power quadratic form A with E_dir(d) = d^H A d, assembled as
// C^H K C over the source spectra about the sphere center. Hermitian by
// construction (upper triangle mirrored).
struct RadiationMatrix {
  Eigen::MatrixXcd A;
  double k = 0.0;
  double sphere_radius = 0.0;
  int truncation_order = 0;
  std::string weight_description;
};

inline RadiationMatrix radiation_matrix(const std::vector<PointSource>& sources,
                                        const DirectionalWeight& weight,
                                        const BoundingSphere& sphere, double k,
                                        const Medium& medium, int N,
                                        const GauntCache* cache = nullptr) {
  for (const auto& s : sources)
    if (!((s.position - sphere.center).norm() < sphere.radius))
      throw std::invalid_argument("radiation_matrix: source outside bounding sphere");
  const Eigen::MatrixXcd C = source_spectrum_matrix(sources, sphere.center, N, k);
  const Eigen::MatrixXcd K = assemble_kernel(weight_spectrum(weight), sphere, N, k, medium, cache);
  const Eigen::MatrixXcd raw = C.adjoint() * K * C;
  const Eigen::Index L = raw.rows();
  Eigen::MatrixXcd A(L, L);
  for (Eigen::Index i = 0; i < L; ++i) {
    A(i, i) = Complex(raw(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < L; ++j) {
      const Complex aij = 0.5 * (raw(i, j) + std::conj(raw(j, i)));
      A(i, j) = aij;
      A(j, i) = std::conj(aij);
    }
  }
  return RadiationMatrix{std::move(A), k, sphere.radius, N, weight.description()};
}

// Outward radial acoustic intensity (1/2) Re[u (i / rho c k) du*/dr] from an
// exterior spectrum's analytic radial derivative.
inline double intensity_radial(const SphericalSpectrum& spec, const Eigen::Vector3d& r,
                               double k, const Medium& medium) {
  const Complex u = evaluate_exterior(spec, r, k);
  const Complex du = evaluate_exterior_radial_derivative(spec, r, k);
  return -0.5 * (u * std::conj(du)).imag() / (medium.density * medium.sound_speed * k);
}

inline double intensity_radial(const std::vector<PointSource>& sources,
                               const Eigen::VectorXcd& d, const Eigen::Vector3d& r,
                               double k, const Medium& medium, int order = -1) {
  double src_radius = 0.0;
  for (const auto& s : sources) src_radius = std::max(src_radius, s.position.norm());
  const int N = order >= 0 ? order : static_cast<int>(std::ceil(k * src_radius)) + 10;
  const SphericalSpectrum spec =
      synthesized_spectrum(sources, d, Eigen::Vector3d::Zero(), N, k);
  return intensity_radial(spec, r, k, medium);
}

struct QuadratureSpec {
  int n_theta = 0;  // 0 = auto: 2 (N + 10) with N = ceil(k * radius)
  int n_phi = 0;    // 0 = auto: 4 (N + 10)
};

struct Sector {
  double theta1 = 0.0, theta2 = std::numbers::pi;
  double phi1 = -std::numbers::pi, phi2 = std::numbers::pi;
};

namespace detail {

struct ResolvedQuadrature {
  int n_theta, n_phi, order;
};

inline ResolvedQuadrature resolve_quadrature(const QuadratureSpec& spec, double k,
                                             double radius) {
  const int N = static_cast<int>(std::ceil(k * radius));
  const int nt = spec.n_theta > 0 ? spec.n_theta : 2 * (N + 10);
  const int np = spec.n_phi > 0 ? spec.n_phi : 4 * (N + 10);
  if (nt < 1 || np < 1)
    throw std::invalid_argument("radiated_power_quadrature: resolution must be positive");
  return {nt, np, N + 10};
}

template <typename WeightFn>
double integrate_intensity(const std::vector<PointSource>& sources,
                           const Eigen::VectorXcd& d, double radius, double k,
                           const Medium& medium, const SphereQuadrature& rule,
                           int order, WeightFn&& w) {
  const SphericalSpectrum spec =
      synthesized_spectrum(sources, d, Eigen::Vector3d::Zero(), order, k);
  if (!(radius > spec.validity_radius))
    throw std::domain_error("radiated_power_quadrature: radius inside validity region");
  const auto h = spherical_hankel1_table(order, k * radius);
  const auto hp = spherical_hankel1_deriv_table(order, k * radius);
  const double iscale = -0.5 / (medium.density * medium.sound_speed * k);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.theta.size(); ++i) {
    for (std::size_t j = 0; j < rule.phi.size(); ++j) {
      const auto ytab = spherical_harmonic_table(order, rule.theta[i], rule.phi[j]);
      Complex u = 0.0, du = 0.0;
      for (int n = 0; n <= order; ++n) {
        for (int m = -n; m <= n; ++m) {
          const Complex base = spec.coeffs(modal_flat(n, m)) *
                               ytab[static_cast<std::size_t>(modal_flat(n, m))];
          u += base * h[static_cast<std::size_t>(n)];
          du += base * (k * hp[static_cast<std::size_t>(n)]);
        }
      }
      const double ir = iscale * (u * std::conj(du)).imag();
      total += rule.wtheta[i] * rule.wphi[j] * ir * w(rule.theta[i], rule.phi[j]);
    }
  }
  return total * radius * radius;
}

}  // namespace detail

// Directionally weighted radiated power through the sphere of `radius`, by
// direct quadrature of the intensity; the weight enters pointwise (closed
// form), independent of the Gaunt-reduction path.
inline double radiated_power_quadrature(const std::vector<PointSource>& sources,
                                        const Eigen::VectorXcd& d,
                                        const DirectionalWeight& weight, double radius,
                                        double k, const Medium& medium,
                                        const QuadratureSpec& qspec = {}) {
  const auto rq = detail::resolve_quadrature(qspec, k, radius);
  const SphereQuadrature rule = intensity_sphere_rule(rq.n_theta, rq.n_phi);
  return detail::integrate_intensity(sources, d, radius, k, medium, rule, rq.order,
                                     [&](double t, double p) { return weight.evaluate(t, p); });
}

// Unweighted radiated power through an angular sector of the sphere.
inline double radiated_power_quadrature(const std::vector<PointSource>& sources,
                                        const Eigen::VectorXcd& d, const Sector& sector,
                                        double radius, double k, const Medium& medium,
                                        const QuadratureSpec& qspec = {}) {
  const auto rq = detail::resolve_quadrature(qspec, k, radius);
  const SphereQuadrature rule =
      sector_rule(rq.n_theta, rq.n_phi, sector.theta1, sector.theta2, sector.phi1, sector.phi2);
  return detail::integrate_intensity(sources, d, radius, k, medium, rule, rq.order,
                                     [](double, double) { return 1.0; });
}

}  // namespace sfs
