#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "sfs/evaluation.hpp"
#include "sfs/radiation.hpp"
#include "sfs/scenario.hpp"
#include "sfs/scenario_io.hpp"
#include "sfs/solvers.hpp"

namespace sfs {

enum class Method { AM, AMRad, AMRadDir };

inline const char* method_label(Method m) {
  switch (m) {
    case Method::AM: return "am";
    case Method::AMRad: return "am-rad";
    default: return "am-rad-dir";
  }
}

inline std::optional<Method> method_from_label(const std::string& label) {
  if (label == "am") return Method::AM;
  if (label == "am-rad") return Method::AMRad;
  if (label == "am-rad-dir") return Method::AMRadDir;
  return std::nullopt;
}

// Raised when a solve breaks down; carries enough context for the runner's
// exit diagnostics.
struct NumericalError : std::runtime_error {
  double frequency_hz;
  std::string method;
  NumericalError(double f, std::string m, const std::string& what)
      : std::runtime_error("method " + m + " at " + std::to_string(f) + " Hz: " + what),
        frequency_hz(f), method(std::move(m)) {}
};

struct RunManifest {
  std::string scenario_path;
  std::string scenario_hash;
  std::vector<Method> methods;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string tool_version = "sfs 0.1.0";
};

struct RunOptions {
  std::vector<Method> methods{Method::AM, Method::AMRad, Method::AMRadDir};
  int threads = 1;
  std::uint64_t seed = 0;
  FieldPlane field_plane;
  bool write_field_grids = true;
};

struct MethodResult {
  Method method;
  std::vector<MetricsRecord> metrics;              // one per frequency, grid order
  std::vector<Eigen::VectorXcd> driving_signals;   // one per frequency
  FieldGrid field;
};

struct RunResult {
  std::vector<MethodResult> methods;
  RunManifest manifest;
};

namespace detail {

// Shortest round-trip decimal form; locale-independent by construction.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "unavailable";
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), fnv1a(bytes), 16);
  return "fnv1a:" + std::string(buf, res.ptr);
}

}  // namespace detail

// The suppression-direction sector used for the P_rad metric: the half space
// the cardioid weighting penalizes (phi in (-pi/2, pi/2), all theta).
inline Sector suppression_sector() {
  return Sector{0.0, std::numbers::pi, -0.5 * std::numbers::pi, 0.5 * std::numbers::pi};
}

// Runs the requested methods over the scenario's frequency grid. Frequencies
// are dispatched to a small worker pool; every result lands in a slot indexed
// by (method, frequency), so output order — and therefore output bytes — do
// not depend on the thread count.
inline RunResult run_experiment(const Scenario& scenario, const RunOptions& options) {
  {
    const auto diags = validate(scenario);
    if (!diags.empty())
      throw ConfigError(diags.front().field, diags.front().message);
  }
  if (options.methods.empty()) throw std::invalid_argument("run_experiment: no methods");
  const int threads = std::max(1, options.threads);
  const std::size_t nfreq = scenario.frequencies.size();
  const std::size_t nmeth = options.methods.size();

  RunResult result;
  result.methods.resize(nmeth);
  for (std::size_t mi = 0; mi < nmeth; ++mi) {
    result.methods[mi].method = options.methods[mi];
    result.methods[mi].metrics.resize(nfreq);
    result.methods[mi].driving_signals.resize(nfreq);
  }

  const bool need_uniform =
      std::find(options.methods.begin(), options.methods.end(), Method::AMRad) !=
      options.methods.end();
  const bool need_directional =
      std::find(options.methods.begin(), options.methods.end(), Method::AMRadDir) !=
      options.methods.end();
  const DirectionalWeight uniform = DirectionalWeight::uniform();
  const Sector sector = suppression_sector();

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::optional<NumericalError> first_error;

  const auto worker = [&]() {
    for (;;) {
      const std::size_t fi = next.fetch_add(1);
      if (fi >= nfreq || failed.load()) return;
      const double f = scenario.frequencies[fi];
      const double k = scenario.medium.wavenumber(f);
      const int N = scenario.truncation.order(k, scenario.bounding.radius);
      try {
        const Eigen::MatrixXcd G =
            transfer_matrix(scenario.sources, scenario.control_points, k);
        Eigen::MatrixXcd A_uni, A_dir;
        if (need_uniform)
          A_uni = radiation_matrix(scenario.sources, uniform, scenario.bounding, k,
                                   scenario.medium, N)
                      .A;
        if (need_directional)
          A_dir = radiation_matrix(scenario.sources, scenario.weight, scenario.bounding, k,
                                   scenario.medium, N)
                      .A;
        for (std::size_t mi = 0; mi < nmeth; ++mi) {
          const Method method = options.methods[mi];
          SolverConfig cfg = scenario.solver;
          const Eigen::MatrixXcd* A = nullptr;
          switch (method) {
            case Method::AM: cfg.gamma = 0.0; break;
            case Method::AMRad: A = &A_uni; break;
            case Method::AMRadDir: A = &A_dir; break;
          }
          static const Eigen::MatrixXcd empty;
          const Eigen::MatrixXcd& Aref = A ? *A : empty;
          try {
            auto [d, state] = amplitude_matching_admm(G, scenario.a_des, Aref, cfg);
            MetricsRecord rec;
            rec.frequency_hz = f;
            rec.method = method_label(method);
            rec.mse = mse(G, d, scenario.a_des);
            rec.p_rad_watt = p_rad_sector(scenario.sources, d, k, scenario.medium,
                                          scenario.bounding.radius, sector);
            rec.iterations = state.iterations;
            rec.final_cost = state.cost_trace.back();
            result.methods[mi].metrics[fi] = rec;
            result.methods[mi].driving_signals[fi] = std::move(d);
          } catch (const std::exception& e) {
            throw NumericalError(f, method_label(method), e.what());
          }
        }
      } catch (const NumericalError& e) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = e;
        failed.store(true);
        return;
      } catch (const std::exception& e) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = NumericalError(f, "setup", e.what());
        failed.store(true);
        return;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) throw *first_error;

  if (options.write_field_grids) {
    std::vector<double> wavenumbers;
    wavenumbers.reserve(nfreq);
    for (double f : scenario.frequencies) wavenumbers.push_back(scenario.medium.wavenumber(f));

    // The dB reference is the plain-AM interior mean when AM ran, so the
    // three maps share one scale; otherwise each map self-references.
    std::vector<std::vector<double>> powers(nmeth);
    for (std::size_t mi = 0; mi < nmeth; ++mi)
      powers[mi] = band_power_grid(scenario.sources, result.methods[mi].driving_signals,
                                   wavenumbers, options.field_plane);
    std::optional<double> am_reference;
    for (std::size_t mi = 0; mi < nmeth; ++mi)
      if (options.methods[mi] == Method::AM)
        am_reference =
            interior_mean_power(powers[mi], options.field_plane, scenario.target);
    for (std::size_t mi = 0; mi < nmeth; ++mi) {
      const double ref = am_reference
                             ? *am_reference
                             : interior_mean_power(powers[mi], options.field_plane,
                                                   scenario.target);
      result.methods[mi].field = field_grid_db(powers[mi], options.field_plane, ref);
    }
  }
  return result;
}

inline void write_metrics_csv(const std::string& path,
                              const std::vector<MetricsRecord>& metrics) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "frequency_hz,mse,p_rad_watt,iterations,final_cost\n";
  for (const auto& r : metrics)
    out << detail::format_number(r.frequency_hz) << ',' << detail::format_number(r.mse) << ','
        << detail::format_number(r.p_rad_watt) << ',' << r.iterations << ','
        << detail::format_number(r.final_cost) << '\n';
}

inline void write_field_csv(const std::string& path, const FieldGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "x,y,power_db\n";
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix)
      out << detail::format_number(grid.x_of(ix)) << ',' << detail::format_number(grid.y_of(iy))
          << ',' << detail::format_number(grid.at(ix, iy)) << '\n';
}

inline void write_manifest(const std::string& path, const RunManifest& manifest,
                           const Scenario& scenario, const RunResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "tool_version=" << manifest.tool_version << '\n';
  out << "scenario_path=" << manifest.scenario_path << '\n';
  out << "scenario_hash=" << manifest.scenario_hash << '\n';
  out << "methods=";
  for (std::size_t i = 0; i < manifest.methods.size(); ++i)
    out << (i ? "," : "") << method_label(manifest.methods[i]);
  out << '\n';
  out << "out_dir=" << manifest.out_dir << '\n';
  out << "seed=" << manifest.seed << '\n';
  out << "frequency_count=" << scenario.frequencies.size() << '\n';
  out << "source_count=" << scenario.sources.size() << '\n';
  out << "control_point_count=" << scenario.control_points.size() << '\n';
  out << "gamma=" << detail::format_number(scenario.solver.gamma) << '\n';
  out << "alpha=" << detail::format_number(scenario.solver.alpha) << '\n';
  out << "xi=" << detail::format_number(scenario.solver.xi) << '\n';
  out << "max_iterations=" << scenario.solver.max_iters << '\n';
  out << "tolerance=" << detail::format_number(scenario.solver.tolerance) << '\n';
  out << "bounding_radius_m=" << detail::format_number(scenario.bounding.radius) << '\n';
  out << "truncation_extra_orders=" << scenario.truncation.extra_orders << '\n';
  for (const auto& m : result.methods)
    if (!m.field.power_db.empty())
      out << "field_db_reference_" << method_label(m.method) << '='
          << detail::format_number(m.field.reference_power) << '\n';
}

// Runs and writes metrics_<method>.csv, field_<method>.csv and manifest.txt
// into out_dir.
inline RunResult run_and_write(const Scenario& scenario, const RunOptions& options,
                               const std::string& out_dir, const std::string& scenario_path,
                               const std::string& tool_version = "sfs 0.1.0") {
  std::filesystem::create_directories(out_dir);
  RunResult result = run_experiment(scenario, options);
  result.manifest.scenario_path = scenario_path;
  result.manifest.scenario_hash = detail::file_hash(scenario_path);
  result.manifest.methods = options.methods;
  result.manifest.out_dir = out_dir;
  result.manifest.seed = options.seed;
  result.manifest.tool_version = tool_version;
  for (const auto& m : result.methods) {
    const std::string label = method_label(m.method);
    write_metrics_csv(out_dir + "/metrics_" + label + ".csv", m.metrics);
    if (!m.field.power_db.empty())
      write_field_csv(out_dir + "/field_" + label + ".csv", m.field);
  }
  write_manifest(out_dir + "/manifest.txt", result.manifest, scenario, result);
  return result;
}

}  // namespace sfs
