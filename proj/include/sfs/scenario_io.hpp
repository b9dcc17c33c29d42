#pragma once

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfs/evaluation.hpp"
#include "sfs/scenario.hpp"

namespace sfs {

// Raised for unreadable, unparsable, or schema-violating configuration; the
// `field` names the offending key when known.
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(const std::string& field_, const std::string& message)
      : std::runtime_error(field_.empty() ? message : field_ + ": " + message), field(field_) {}
};

namespace detail {

using Json = nlohmann::json;

inline Eigen::Vector3d parse_vec3(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError(field, "expected an array of 3 numbers");
  try {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
  } catch (const Json::exception& e) {
    throw ConfigError(field, e.what());
  }
}

template <typename T>
T get_field(const Json& j, const std::string& key, const std::string& section) {
  if (!j.contains(key)) throw ConfigError(section + "." + key, "missing required field");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(section + "." + key, e.what());
  }
}

template <typename T>
T get_or(const Json& j, const std::string& key, T fallback, const std::string& section) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(section + "." + key, e.what());
  }
}

}  // namespace detail

// Scenario schema (JSON; see README for the commented version):
//   medium:           { sound_speed_mps, air_density_kgm3 }
//   bounding_sphere:  { center: [x,y,z], radius_m }
//   target_cylinder:  { center: [x,y,z], radius_m, height_m }
//   sources:          { preset: "rings24" } | [[x,y,z], ...]
//   control_points:   { lattice_pitch_m } | [[x,y,z], ...]
//   weight:           { family: "uniform" }
//                     | { family: "one_plus_cardioid", axis: [x,y,z] }
//                     | { max_order, coefficients: [[n,m,re,im], ...] }
//   frequencies_hz:   { start, stop, step } | [f, ...]
//   desired_amplitude: scalar | [a, ...]
//   solver:           { gamma, alpha, xi, max_iterations, tolerance }
//   truncation:       { extra_orders }            (optional)
//   field_grid:       { z_m, half_extent_m, step_m }  (optional, run output)
inline Scenario scenario_from_json(const detail::Json& j) {
  using detail::Json;
  Scenario s;

  if (!j.is_object()) throw ConfigError("", "top level must be an object");

  {
    if (!j.contains("medium")) throw ConfigError("medium", "missing section");
    const Json& m = j.at("medium");
    try {
      s.medium = Medium(detail::get_field<double>(m, "sound_speed_mps", "medium"),
                        detail::get_field<double>(m, "air_density_kgm3", "medium"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("medium", e.what());
    }
  }
  {
    if (!j.contains("bounding_sphere")) throw ConfigError("bounding_sphere", "missing section");
    const Json& b = j.at("bounding_sphere");
    try {
      s.bounding = BoundingSphere(
          detail::parse_vec3(b.value("center", Json::array({0.0, 0.0, 0.0})),
                             "bounding_sphere.center"),
          detail::get_field<double>(b, "radius_m", "bounding_sphere"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("bounding_sphere", e.what());
    }
  }
  {
    if (!j.contains("target_cylinder")) throw ConfigError("target_cylinder", "missing section");
    const Json& t = j.at("target_cylinder");
    try {
      s.target = CylinderRegion(
          detail::parse_vec3(t.value("center", Json::array({0.0, 0.0, 0.0})),
                             "target_cylinder.center"),
          detail::get_field<double>(t, "radius_m", "target_cylinder"),
          detail::get_field<double>(t, "height_m", "target_cylinder"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("target_cylinder", e.what());
    }
  }
  {
    if (!j.contains("sources")) throw ConfigError("sources", "missing section");
    const Json& src = j.at("sources");
    if (src.is_object()) {
      const std::string preset = detail::get_field<std::string>(src, "preset", "sources");
      if (preset == "rings24")
        s.sources = ring_array({0.453, 0.653}, {-0.2, 0.2}, 6);
      else
        throw ConfigError("sources.preset", "unknown preset '" + preset + "'");
    } else if (src.is_array()) {
      for (std::size_t i = 0; i < src.size(); ++i)
        s.sources.push_back(
            {detail::parse_vec3(src.at(i), "sources[" + std::to_string(i) + "]")});
    } else {
      throw ConfigError("sources", "expected preset object or array of positions");
    }
  }
  {
    if (!j.contains("control_points")) throw ConfigError("control_points", "missing section");
    const Json& cp = j.at("control_points");
    if (cp.is_object()) {
      const double pitch = detail::get_field<double>(cp, "lattice_pitch_m", "control_points");
      if (!(pitch > 0.0)) throw ConfigError("control_points.lattice_pitch_m", "must be positive");
      s.control_points = cylinder_lattice(s.target, pitch);
    } else if (cp.is_array()) {
      for (std::size_t i = 0; i < cp.size(); ++i)
        s.control_points.push_back(
            detail::parse_vec3(cp.at(i), "control_points[" + std::to_string(i) + "]"));
    } else {
      throw ConfigError("control_points", "expected lattice object or array of positions");
    }
  }
  {
    const Json w = j.value("weight", Json{{"family", "uniform"}});
    try {
      if (w.contains("family")) {
        const std::string family = w.at("family").get<std::string>();
        if (family == "uniform") {
          s.weight = DirectionalWeight::uniform();
        } else if (family == "one_plus_cardioid") {
          s.weight = DirectionalWeight::one_plus_cardioid(
              detail::parse_vec3(w.value("axis", Json::array({1.0, 0.0, 0.0})), "weight.axis"));
        } else {
          throw ConfigError("weight.family", "unknown family '" + family + "'");
        }
      } else if (w.contains("coefficients")) {
        const int max_order = detail::get_field<int>(w, "max_order", "weight");
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(modal_count(max_order));
        for (const auto& entry : w.at("coefficients")) {
          if (!entry.is_array() || entry.size() != 4)
            throw ConfigError("weight.coefficients", "expected entries [n, m, re, im]");
          const int n = entry.at(0).get<int>(), m = entry.at(1).get<int>();
          c(ModalIndexMap(max_order).flat(n, m)) =
              Complex(entry.at(2).get<double>(), entry.at(3).get<double>());
        }
        s.weight = DirectionalWeight::from_spectrum(max_order, std::move(c), "custom");
      } else {
        throw ConfigError("weight", "expected 'family' or 'coefficients'");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError("weight", e.what());
    } catch (const Json::exception& e) {
      throw ConfigError("weight", e.what());
    }
  }
  {
    if (!j.contains("frequencies_hz")) throw ConfigError("frequencies_hz", "missing section");
    const Json& f = j.at("frequencies_hz");
    if (f.is_object()) {
      const double start = detail::get_field<double>(f, "start", "frequencies_hz");
      const double stop = detail::get_field<double>(f, "stop", "frequencies_hz");
      const double step = detail::get_field<double>(f, "step", "frequencies_hz");
      if (!(step > 0.0) || stop < start)
        throw ConfigError("frequencies_hz", "need step > 0 and stop >= start");
      for (double v = start; v <= stop + 1e-9; v += step) s.frequencies.push_back(v);
    } else if (f.is_array()) {
      for (const auto& v : f) s.frequencies.push_back(v.get<double>());
    } else {
      throw ConfigError("frequencies_hz", "expected range object or array");
    }
  }
  {
    const Json a = j.value("desired_amplitude", Json(1.0));
    if (a.is_number()) {
      s.a_des = Eigen::VectorXd::Constant(
          static_cast<Eigen::Index>(s.control_points.size()), a.get<double>());
    } else if (a.is_array()) {
      s.a_des.resize(static_cast<Eigen::Index>(a.size()));
      for (std::size_t i = 0; i < a.size(); ++i)
        s.a_des(static_cast<Eigen::Index>(i)) = a.at(i).get<double>();
    } else {
      throw ConfigError("desired_amplitude", "expected scalar or array");
    }
  }
  {
    const Json sol = j.value("solver", Json::object());
    s.solver.gamma = detail::get_or<double>(sol, "gamma", 2.0e4, "solver");
    s.solver.alpha = detail::get_or<double>(sol, "alpha", 1.0e-3, "solver");
    s.solver.xi = detail::get_or<double>(sol, "xi", 1.0, "solver");
    s.solver.max_iters = detail::get_or<int>(sol, "max_iterations", 500, "solver");
    s.solver.tolerance = detail::get_or<double>(sol, "tolerance", 1e-6, "solver");
  }
  {
    const Json t = j.value("truncation", Json::object());
    s.truncation.extra_orders = detail::get_or<int>(t, "extra_orders", 0, "truncation");
  }
  return s;
}

inline FieldPlane field_plane_from_json(const detail::Json& j) {
  FieldPlane p;
  if (!j.contains("field_grid")) return p;
  const auto& g = j.at("field_grid");
  p.z = detail::get_or<double>(g, "z_m", 0.0, "field_grid");
  const double half = detail::get_or<double>(g, "half_extent_m", 1.2, "field_grid");
  p.step = detail::get_or<double>(g, "step_m", 0.02, "field_grid");
  if (!(half > 0.0) || !(p.step > 0.0))
    throw ConfigError("field_grid", "extent and step must be positive");
  p.x_min = p.y_min = -half;
  p.x_max = p.y_max = half;
  return p;
}

inline detail::Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  try {
    return detail::Json::parse(in);
  } catch (const detail::Json::parse_error& e) {
    throw ConfigError("", std::string("JSON parse error: ") + e.what());
  }
}

inline Scenario scenario_from_file(const std::string& path) {
  return scenario_from_json(load_json_file(path));
}

// Explicit-form serialization (positions and frequencies written out), the
// inverse of scenario_from_json up to presets.
inline detail::Json scenario_to_json(const Scenario& s) {
  using detail::Json;
  Json j;
  j["medium"] = {{"sound_speed_mps", s.medium.sound_speed},
                 {"air_density_kgm3", s.medium.density}};
  j["bounding_sphere"] = {
      {"center", {s.bounding.center.x(), s.bounding.center.y(), s.bounding.center.z()}},
      {"radius_m", s.bounding.radius}};
  j["target_cylinder"] = {
      {"center", {s.target.center.x(), s.target.center.y(), s.target.center.z()}},
      {"radius_m", s.target.radius},
      {"height_m", s.target.height}};
  Json src = Json::array();
  for (const auto& p : s.sources)
    src.push_back({p.position.x(), p.position.y(), p.position.z()});
  j["sources"] = src;
  Json cp = Json::array();
  for (const auto& p : s.control_points) cp.push_back({p.x(), p.y(), p.z()});
  j["control_points"] = cp;
  Json wc = Json::array();
  for (int n = 0; n <= s.weight.max_order(); ++n)
    for (int m = -n; m <= n; ++m) {
      const Complex v = s.weight.coeffs()(modal_flat(n, m));
      if (v != Complex(0.0, 0.0)) wc.push_back({n, m, v.real(), v.imag()});
    }
  j["weight"] = {{"max_order", s.weight.max_order()}, {"coefficients", wc}};
  j["frequencies_hz"] = s.frequencies;
  Json a = Json::array();
  for (Eigen::Index i = 0; i < s.a_des.size(); ++i) a.push_back(s.a_des(i));
  j["desired_amplitude"] = a;
  j["solver"] = {{"gamma", s.solver.gamma},
                 {"alpha", s.solver.alpha},
                 {"xi", s.solver.xi},
                 {"max_iterations", s.solver.max_iters},
                 {"tolerance", s.solver.tolerance}};
  j["truncation"] = {{"extra_orders", s.truncation.extra_orders}};
  return j;
}

}  // namespace sfs
