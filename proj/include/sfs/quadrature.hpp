#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sfs {

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// Nodes and weights by Newton iteration on the Legendre recurrence.
inline GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  GaussLegendre gl;
  gl.nodes.resize(static_cast<std::size_t>(n));
  gl.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int q = 2; q <= n; ++q) {
        const double p2 = ((2.0 * q - 1.0) * x * p1 - (q - 1.0) * p0) / q;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    gl.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    gl.nodes[static_cast<std::size_t>(i)] = -x;
    gl.weights[static_cast<std::size_t>(i)] = w;
  }
  return gl;
}

// Tensor rule over a patch of the unit sphere; solid-angle weight of node
// (i,j) is wtheta[i] * wphi[j], the sin(theta) Jacobian being absorbed by
// integrating in cos(theta).
struct SphereQuadrature {
  std::vector<double> theta, wtheta;
  std::vector<double> phi, wphi;

  template <typename F>
  double integrate(F&& f) const {
    double total = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < phi.size(); ++j)
        row += wphi[j] * f(theta[i], phi[j]);
      total += wtheta[i] * row;
    }
    return total;
  }
};

// Gauss-Legendre in cos(theta) x uniform trapezoid in phi. The phi rule is
// spectrally exact for trigonometric polynomials of degree < n_phi.
inline SphereQuadrature full_sphere_rule(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1)
    throw std::invalid_argument("full_sphere_rule: need positive resolution");
  SphereQuadrature q;
  const GaussLegendre gl = gauss_legendre(n_theta);
  q.theta.resize(gl.nodes.size());
  q.wtheta = gl.weights;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) q.theta[i] = std::acos(gl.nodes[i]);
  q.phi.resize(static_cast<std::size_t>(n_phi));
  q.wphi.assign(static_cast<std::size_t>(n_phi), 2.0 * std::numbers::pi / n_phi);
  for (int j = 0; j < n_phi; ++j)
    q.phi[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * j / n_phi;
  return q;
}

// Gauss-Legendre in theta itself (sin(theta) Jacobian folded into the
// weights) x uniform trapezoid in phi. Intensity-type integrands carry cross
// terms with odd powers of sin(theta), which are square-root singular in the
// cos(theta) variable but remain trigonometric polynomials in theta, so this
// rule keeps spectral accuracy for them.
inline SphereQuadrature intensity_sphere_rule(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1)
    throw std::invalid_argument("intensity_sphere_rule: need positive resolution");
  SphereQuadrature q;
  const GaussLegendre gl = gauss_legendre(n_theta);
  q.theta.resize(gl.nodes.size());
  q.wtheta.resize(gl.nodes.size());
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    q.theta[i] = 0.5 * std::numbers::pi * (gl.nodes[i] + 1.0);
    q.wtheta[i] = 0.5 * std::numbers::pi * gl.weights[i] * std::sin(q.theta[i]);
  }
  q.phi.resize(static_cast<std::size_t>(n_phi));
  q.wphi.assign(static_cast<std::size_t>(n_phi), 2.0 * std::numbers::pi / n_phi);
  for (int j = 0; j < n_phi; ++j)
    q.phi[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * j / n_phi;
  return q;
}

// Gauss-Legendre in theta over [theta1, theta2] x Gauss-Legendre in phi over
// [phi1, phi2], sin(theta) Jacobian in the theta weights. Trapezoid loses
// its spectral accuracy on a phi sub-interval, so sectors use GL on both
// axes.
inline SphereQuadrature sector_rule(int n_theta, int n_phi, double theta1, double theta2,
                                    double phi1, double phi2) {
  if (n_theta < 1 || n_phi < 1)
    throw std::invalid_argument("sector_rule: need positive resolution");
  if (!(theta2 > theta1) || !(phi2 > phi1))
    throw std::invalid_argument("sector_rule: empty sector");
  SphereQuadrature q;
  const GaussLegendre glt = gauss_legendre(n_theta);
  q.theta.resize(glt.nodes.size());
  q.wtheta.resize(glt.nodes.size());
  for (std::size_t i = 0; i < glt.nodes.size(); ++i) {
    q.theta[i] = 0.5 * (theta2 - theta1) * glt.nodes[i] + 0.5 * (theta2 + theta1);
    q.wtheta[i] = 0.5 * (theta2 - theta1) * glt.weights[i] * std::sin(q.theta[i]);
  }
  const GaussLegendre glp = gauss_legendre(n_phi);
  q.phi.resize(glp.nodes.size());
  q.wphi.resize(glp.nodes.size());
  for (std::size_t j = 0; j < glp.nodes.size(); ++j) {
    q.phi[j] = 0.5 * (phi2 - phi1) * glp.nodes[j] + 0.5 * (phi2 + phi1);
    q.wphi[j] = 0.5 * (phi2 - phi1) * glp.weights[j];
  }
  return q;
}

}  // namespace sfs
