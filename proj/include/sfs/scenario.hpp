#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sfs/radiation.hpp"
#include "sfs/solvers.hpp"
#include "sfs/wavefield.hpp"

namespace sfs {

struct CylinderRegion {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.2;
  double height = 0.1;

  CylinderRegion() = default;
  CylinderRegion(const Eigen::Vector3d& c, double r, double h)
      : center(c), radius(r), height(h) {
    if (!(r > 0.0) || !(h > 0.0))
      throw std::invalid_argument("CylinderRegion: radius and height must be positive");
  }

  bool contains(const Eigen::Vector3d& p, double tol = 1e-9) const {
    const Eigen::Vector3d q = p - center;
    return std::hypot(q.x(), q.y()) <= radius + tol && std::fabs(q.z()) <= 0.5 * height + tol;
  }
};

// N(k) = ceil(k R) + extra_orders, the expansion truncation used for the
// radiation matrices.
struct TruncationRule {
  int extra_orders = 0;

  int order(double k, double sphere_radius) const {
    return static_cast<int>(std::ceil(k * sphere_radius)) + extra_orders;
  }
};

struct Scenario {
  Medium medium;
  std::vector<PointSource> sources;
  std::vector<Eigen::Vector3d> control_points;
  BoundingSphere bounding;
  CylinderRegion target;
  DirectionalWeight weight;  // directional variant; the uniform one is implied
  std::vector<double> frequencies;
  Eigen::VectorXd a_des;
  SolverConfig solver;
  TruncationRule truncation;
};

struct Diagnostic {
  std::string field;
  std::string message;
};

// Geometric and parameter checks; an empty list means the scenario is usable.
inline std::vector<Diagnostic> validate(const Scenario& s) {
  std::vector<Diagnostic> out;
  const auto add = [&out](const std::string& field, const std::string& msg) {
    out.push_back({field, msg});
  };

  if (!(s.medium.sound_speed > 0.0)) add("medium.sound_speed", "must be positive");
  if (!(s.medium.density > 0.0)) add("medium.density", "must be positive");
  if (!(s.bounding.radius > 0.0)) add("bounding_sphere.radius", "must be positive");
  if (s.sources.empty()) add("sources", "no secondary sources");
  if (s.control_points.empty()) add("control_points", "no control points");

  for (std::size_t l = 0; l < s.sources.size(); ++l) {
    const auto& p = s.sources[l].position;
    if (!((p - s.bounding.center).norm() < s.bounding.radius))
      add("sources[" + std::to_string(l) + "]", "outside bounding sphere");
    if (s.target.contains(p))
      add("sources[" + std::to_string(l) + "]", "inside target region");
  }
  for (std::size_t i = 0; i < s.control_points.size(); ++i)
    if (!s.target.contains(s.control_points[i]))
      add("control_points[" + std::to_string(i) + "]", "outside target region");

  if (s.a_des.size() != static_cast<Eigen::Index>(s.control_points.size()))
    add("desired_amplitude", "length != control point count");
  if ((s.a_des.array() < 0.0).any()) add("desired_amplitude", "negative entry");

  if (s.frequencies.empty()) add("frequencies", "empty grid");
  for (double f : s.frequencies)
    if (!(f > 0.0)) add("frequencies", "nonpositive frequency");

  if (!(s.solver.alpha > 0.0)) add("solver.alpha", "nonpositive regularization");
  if (!(s.solver.xi > 0.0)) add("solver.xi", "nonpositive ADMM penalty");
  if (!(s.solver.gamma >= 0.0)) add("solver.gamma", "negative penalty weight");
  if (s.solver.max_iters < 1) add("solver.max_iters", "must be >= 1");
  if (!(s.solver.tolerance > 0.0)) add("solver.tolerance", "must be positive");
  if (s.truncation.extra_orders < 0) add("truncation.extra_orders", "must be >= 0");

  return out;
}

// Cubic lattice of the given pitch clipped to the cylinder, boundary
// inclusive with 1e-9 slack so rim points survive. Deterministic order:
// z-major, then y, then x.
inline std::vector<Eigen::Vector3d> cylinder_lattice(const CylinderRegion& cyl, double pitch) {
  if (!(pitch > 0.0)) throw std::invalid_argument("cylinder_lattice: pitch must be positive");
  constexpr double tol = 1e-9;
  std::vector<Eigen::Vector3d> pts;
  const int iz = static_cast<int>(std::floor(0.5 * cyl.height / pitch + tol));
  const int ir = static_cast<int>(std::floor(cyl.radius / pitch + tol));
  for (int kz = -iz; kz <= iz; ++kz)
    for (int jy = -ir; jy <= ir; ++jy)
      for (int ix = -ir; ix <= ir; ++ix) {
        const double x = ix * pitch, y = jy * pitch;
        if (x * x + y * y <= cyl.radius * cyl.radius + tol)
          pts.push_back(cyl.center + Eigen::Vector3d(x, y, kz * pitch));
      }
  return pts;
}

// 6 equiangular sources per ring, rings at both radii and both heights, the
// first source of every ring on the +x axis.
inline std::vector<PointSource> ring_array(const std::vector<double>& radii,
                                           const std::vector<double>& heights,
                                           int per_ring, double first_angle = 0.0) {
  std::vector<PointSource> out;
  for (double z : heights)
    for (double r : radii)
      for (int i = 0; i < per_ring; ++i) {
        const double ang = first_angle + 2.0 * std::numbers::pi * i / per_ring;
        out.push_back({Eigen::Vector3d(r * std::cos(ang), r * std::sin(ang), z)});
      }
  return out;
}

// Bundled reference experiment: 24-source dual-ring array around a
// cylindrical target, amplitude 1 desired everywhere, +x-cardioid weighting,
// 100-1000 Hz grid.
inline Scenario reference_scenario(double freq_step = 20.0) {
  Scenario s;
  s.medium = Medium(343.0, 1.293);
  s.bounding = BoundingSphere(Eigen::Vector3d::Zero(), 0.8);
  s.target = CylinderRegion(Eigen::Vector3d::Zero(), 0.2, 0.1);
  s.sources = ring_array({0.453, 0.653}, {-0.2, 0.2}, 6);
  s.control_points = cylinder_lattice(s.target, 0.05);
  s.weight = DirectionalWeight::one_plus_cardioid(Eigen::Vector3d::UnitX());
  for (double f = 100.0; f <= 1000.0 + 1e-9; f += freq_step) s.frequencies.push_back(f);
  s.a_des = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(s.control_points.size()));
  s.solver = SolverConfig{2.0e4, 1.0e-3, 1.0, 500, 1e-6};
  s.truncation = TruncationRule{0};
  return s;
}

}  // namespace sfs
