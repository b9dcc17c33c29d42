#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfs/radiation.hpp"
#include "sfs/scenario.hpp"
#include "sfs/wavefield.hpp"

namespace sfs {

struct MetricsRecord {
  double frequency_hz = 0.0;
  double mse = 0.0;
  double p_rad_watt = 0.0;
  int iterations = 0;
  double final_cost = 0.0;
  std::string method;
};

// Mean over control points of the squared amplitude error, (1/I) || |Gd| - a_des ||^2.
inline double mse(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& d,
                  const Eigen::VectorXd& a_des) {
  if (a_des.size() != G.rows() || d.size() != G.cols())
    throw std::invalid_argument("mse: dimension mismatch");
  return ((G * d).cwiseAbs() - a_des).squaredNorm() / static_cast<double>(G.rows());
}

// Radiated power through an angular sector of the sphere of `radius`.
inline double p_rad_sector(const std::vector<PointSource>& sources, const Eigen::VectorXcd& d,
                           double k, const Medium& medium, double radius,
                           const Sector& sector, const QuadratureSpec& qspec = {}) {
  return radiated_power_quadrature(sources, d, sector, radius, k, medium, qspec);
}

struct FieldPlane {
  double z = 0.0;
  double x_min = -1.2, x_max = 1.2;
  double y_min = -1.2, y_max = 1.2;
  double step = 0.02;
};

struct FieldGrid {
  FieldPlane plane;
  int nx = 0, ny = 0;
  std::vector<double> power_db;  // row-major, x fastest; floor -80 dB
  double reference_power = 0.0;

  double at(int ix, int iy) const { return power_db[static_cast<std::size_t>(iy) * nx + ix]; }
  double x_of(int ix) const { return plane.x_min + ix * plane.step; }
  double y_of(int iy) const { return plane.y_min + iy * plane.step; }
};

namespace detail {

inline int grid_count(double lo, double hi, double step) {
  return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

}  // namespace detail

// Per-point power summed across the frequency band, sum_f |u_f(r)|^2, from
// the exact source sum (valid inside and outside the array). Points within
// 1 cm of a source are masked to zero power.
inline std::vector<double> band_power_grid(const std::vector<PointSource>& sources,
                                           const std::vector<Eigen::VectorXcd>& d_per_freq,
                                           const std::vector<double>& wavenumbers,
                                           const FieldPlane& plane) {
  if (d_per_freq.size() != wavenumbers.size())
    throw std::invalid_argument("band_power_grid: driving signals / wavenumbers mismatch");
  const int nx = detail::grid_count(plane.x_min, plane.x_max, plane.step);
  const int ny = detail::grid_count(plane.y_min, plane.y_max, plane.step);
  std::vector<double> power(static_cast<std::size_t>(nx) * ny, 0.0);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const Eigen::Vector3d r(plane.x_min + ix * plane.step, plane.y_min + iy * plane.step,
                              plane.z);
      bool masked = false;
      for (const auto& s : sources)
        if ((r - s.position).norm() < 0.01) { masked = true; break; }
      if (masked) continue;
      double p = 0.0;
      for (std::size_t fidx = 0; fidx < wavenumbers.size(); ++fidx) {
        Complex u = 0.0;
        for (std::size_t l = 0; l < sources.size(); ++l)
          u += d_per_freq[fidx](static_cast<Eigen::Index>(l)) *
               greens_function(sources[l], r, wavenumbers[fidx]);
        p += std::norm(u);
      }
      power[static_cast<std::size_t>(iy) * nx + ix] = p;
    }
  }
  return power;
}

// dB map relative to `reference_power`, floored at -80 dB (which also covers
// masked or silent points).
inline FieldGrid field_grid_db(const std::vector<double>& band_power, const FieldPlane& plane,
                               double reference_power) {
  if (!(reference_power > 0.0))
    throw std::invalid_argument("field_grid_db: reference power must be positive");
  FieldGrid g;
  g.plane = plane;
  g.nx = detail::grid_count(plane.x_min, plane.x_max, plane.step);
  g.ny = detail::grid_count(plane.y_min, plane.y_max, plane.step);
  if (band_power.size() != static_cast<std::size_t>(g.nx) * g.ny)
    throw std::invalid_argument("field_grid_db: grid size mismatch");
  g.reference_power = reference_power;
  g.power_db.resize(band_power.size());
  constexpr double floor_db = -80.0;
  for (std::size_t i = 0; i < band_power.size(); ++i) {
    const double ratio = band_power[i] / reference_power;
    g.power_db[i] = ratio > 0.0 ? std::max(10.0 * std::log10(ratio), floor_db) : floor_db;
  }
  return g;
}

// Mean band power over grid points inside the target cylinder (the dB
// reference used for the field maps).
inline double interior_mean_power(const std::vector<double>& band_power,
                                  const FieldPlane& plane, const CylinderRegion& target) {
  const int nx = detail::grid_count(plane.x_min, plane.x_max, plane.step);
  const int ny = detail::grid_count(plane.y_min, plane.y_max, plane.step);
  double sum = 0.0;
  int count = 0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const Eigen::Vector3d r(plane.x_min + ix * plane.step, plane.y_min + iy * plane.step,
                              plane.z);
      if (!target.contains(r)) continue;
      sum += band_power[static_cast<std::size_t>(iy) * nx + ix];
      ++count;
    }
  if (count == 0) throw std::domain_error("interior_mean_power: no grid points inside target");
  return sum / count;
}

}  // namespace sfs
