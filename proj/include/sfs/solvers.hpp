#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sfs/wavefield.hpp"

namespace sfs {

struct SolverConfig {
  double gamma = 2.0e4;    // radiation penalty weight, >= 0
  double alpha = 1.0e-3;   // Tikhonov weight, > 0
  double xi = 1.0;         // ADMM penalty, > 0
  int max_iters = 500;
  double tolerance = 1e-6; // relative stopping threshold

  // The amplitude-matching objective is nonconvex; a single warm-started run
  // can land in a poor basin. restarts > 0 adds that many extra ADMM runs
  // from screened random initializations (restart_candidates sampled, the
  // best by objective kept as starting points) and returns the best outcome.
  // Deterministic: the candidate stream is fixed-seeded.
  int restarts = 0;
  int restart_candidates = 0;  // 0 = auto (1000 * restarts)

  void validate() const {
    if (!(gamma >= 0.0)) throw std::invalid_argument("SolverConfig: gamma must be >= 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("SolverConfig: alpha must be > 0");
    if (!(xi > 0.0)) throw std::invalid_argument("SolverConfig: xi must be > 0");
    if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("SolverConfig: tolerance must be > 0");
    if (restarts < 0 || restart_candidates < 0)
      throw std::invalid_argument("SolverConfig: restart counts must be >= 0");
  }
};

// Complex I x L matrix with entry (i, l) = g_l(r_i).
using TransferMatrix = Eigen::MatrixXcd;

// Monopole transfer functions from sources to control points.
inline TransferMatrix transfer_matrix(const std::vector<PointSource>& sources,
                                      const std::vector<Eigen::Vector3d>& points,
                                      double k) {
  TransferMatrix G(static_cast<Eigen::Index>(points.size()),
                   static_cast<Eigen::Index>(sources.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t l = 0; l < sources.size(); ++l)
      G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
          greens_function(sources[l], points[i], k);
  return G;
}

struct AdmmState {
  DrivingSignals d;
  Eigen::VectorXcd lambda;  // multiplier, one entry per control point
  int iterations = 0;
  std::vector<double> cost_trace;  // cost at d^(0) .. d^(iterations)
};

namespace detail {

inline void check_dims(const Eigen::MatrixXcd& G, Eigen::Index rhs_rows,
                       const Eigen::MatrixXcd& A, const char* who) {
  if (rhs_rows != G.rows())
    throw std::invalid_argument(std::string(who) + ": target length != control point count");
  if (A.size() != 0 && (A.rows() != G.cols() || A.cols() != G.cols()))
    throw std::invalid_argument(std::string(who) + ": radiation matrix shape mismatch");
}

// LDLT solve with one step of iterative refinement.
inline Eigen::VectorXcd refined_solve(const Eigen::LDLT<Eigen::MatrixXcd>& ldlt,
                                      const Eigen::MatrixXcd& M, const Eigen::VectorXcd& rhs) {
  Eigen::VectorXcd x = ldlt.solve(rhs);
  x += ldlt.solve(rhs - M * x);
  return x;
}

}  // namespace detail

// || |Gd| - a_des ||^2 + gamma d^H A d + alpha ||d||^2. Pass an empty A to
// drop the radiation term.
inline double cost_amplitude(const Eigen::MatrixXcd& G, const Eigen::VectorXd& a_des,
                             const Eigen::MatrixXcd& A, double gamma, double alpha,
                             const Eigen::VectorXcd& d) {
  detail::check_dims(G, a_des.size(), A, "cost_amplitude");
  const Eigen::VectorXd amp = (G * d).cwiseAbs();
  double cost = (amp - a_des).squaredNorm() + alpha * d.squaredNorm();
  if (A.size() != 0 && gamma != 0.0) cost += gamma * (d.adjoint() * A * d)(0).real();
  return cost;
}

// Closed-form regularized pressure matching:
//   d = (G^H G + gamma A + alpha I)^{-1} G^H u_des,
// the unique minimizer of ||Gd - u_des||^2 + gamma d^H A d + alpha ||d||^2.
inline DrivingSignals pressure_matching(const Eigen::MatrixXcd& G,
                                          const Eigen::VectorXcd& u_des,
                                          const Eigen::MatrixXcd& A, double gamma,
                                          double alpha) {
  detail::check_dims(G, u_des.size(), A, "pressure_matching");
  if (!(alpha > 0.0)) throw std::invalid_argument("pressure_matching: alpha must be > 0");
  const Eigen::Index L = G.cols();
  Eigen::MatrixXcd M = G.adjoint() * G +
                       alpha * Eigen::MatrixXcd::Identity(L, L);
  if (A.size() != 0 && gamma != 0.0) M += gamma * A;
  const Eigen::LDLT<Eigen::MatrixXcd> ldlt(M);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("pressure_matching: factorization failed");
  return detail::refined_solve(ldlt, M, G.adjoint() * u_des);
}

namespace detail {

// One ADMM run, exactly the update scheme below, from the given start.
// The nonconvex objective makes ADMM non-monotone, so the lowest-cost
// iterate seen (including the start) is reported as the run's result.
inline AdmmState admm_single_run(const Eigen::MatrixXcd& G, const Eigen::VectorXd& a_des,
                                 const Eigen::MatrixXcd& A, const SolverConfig& cfg,
                                 const Eigen::LDLT<Eigen::MatrixXcd>& ldlt,
                                 const Eigen::MatrixXcd& M, Eigen::VectorXcd d,
                                 Eigen::VectorXcd lambda) {
  const Eigen::Index I = G.rows();
  const double xi = cfg.xi;

  AdmmState state;
  state.cost_trace.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
  state.cost_trace.push_back(cost_amplitude(G, a_des, A, cfg.gamma, cfg.alpha, d));
  Eigen::VectorXcd best_d = d;
  double best_cost = state.cost_trace.front();

  int t = 0;
  while (t < cfg.max_iters) {
    const Eigen::VectorXcd h = G * d + lambda / xi;
    Eigen::VectorXcd phase(I);
    for (Eigen::Index i = 0; i < I; ++i)
      phase(i) = (h(i) == Complex(0.0, 0.0)) ? Complex(1.0, 0.0) : h(i) / std::abs(h(i));
    const Eigen::VectorXd a = (xi * h.cwiseAbs() + 2.0 * a_des) / (xi + 2.0);
    const Eigen::VectorXcd target = a.cast<Complex>().cwiseProduct(phase);

    const Eigen::VectorXcd d_new =
        refined_solve(ldlt, M, G.adjoint() * (target - lambda / xi));
    if (!d_new.allFinite())
      throw std::runtime_error("amplitude_matching_admm: non-finite iterate at iteration " +
                               std::to_string(t + 1));
    const Eigen::VectorXcd Gd = G * d_new;
    lambda += xi * (Gd - target);
    ++t;

    const double cost = cost_amplitude(G, a_des, A, cfg.gamma, cfg.alpha, d_new);
    state.cost_trace.push_back(cost);
    if (cost < best_cost) {
      best_cost = cost;
      best_d = d_new;
    }

    const double primal = (Gd - target).norm();
    const double change = (d_new - d).norm();
    d = d_new;
    if (primal <= cfg.tolerance * std::max(1.0, a_des.norm()) &&
        change <= cfg.tolerance * std::max(1.0, d.norm()))
      break;
  }

  state.d = std::move(best_d);
  state.lambda = std::move(lambda);
  state.iterations = t;
  return state;
}

}  // namespace detail

// ADMM for amplitude matching with a radiation-power penalty:
//
//   minimize || |Gd| - a_des ||^2 + gamma d^H A d + alpha ||d||^2
//
// Per iteration: h = Gd + lambda/xi; theta = arg(h) (arg 0 := 0);
// a = (xi |h| + 2 a_des) / (xi + 2);
// d <- (G^H G + (2 gamma/xi) A + (2 alpha/xi) I)^{-1} G^H (a e^{i theta} - lambda/xi);
// lambda <- lambda + xi (G d - a e^{i theta}).
//
// The system matrix is constant across iterations and starts, so it is
// factored once per call. A run stops at max_iters or when the primal
// residual ||Gd - a e^{i theta}|| and the successive-d change both fall
// below the relative tolerance.
//
// Default initialization: pressure matching against a_des with zero phase,
// lambda = 0. Pass `init` to override (explicit inits run single-shot).
// With cfg.restarts > 0 and no explicit init, additional runs start from the
// best of cfg.restart_candidates screened random points and the best run
// wins; the warm start is always among the candidates, so the result is
// never worse than it. The returned state is the winning run's.
inline std::pair<DrivingSignals, AdmmState> amplitude_matching_admm(
    const Eigen::MatrixXcd& G, const Eigen::VectorXd& a_des, const Eigen::MatrixXcd& A,
    const SolverConfig& cfg, const AdmmState* init = nullptr) {
  cfg.validate();
  detail::check_dims(G, a_des.size(), A, "amplitude_matching_admm");
  if ((a_des.array() < 0.0).any())
    throw std::invalid_argument("amplitude_matching_admm: a_des must be nonnegative");
  const Eigen::Index I = G.rows(), L = G.cols();
  const double xi = cfg.xi;

  Eigen::MatrixXcd M = G.adjoint() * G +
                       (2.0 * cfg.alpha / xi) * Eigen::MatrixXcd::Identity(L, L);
  if (A.size() != 0 && cfg.gamma != 0.0) M += (2.0 * cfg.gamma / xi) * A;
  const Eigen::LDLT<Eigen::MatrixXcd> ldlt(M);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("amplitude_matching_admm: factorization failed");

  Eigen::VectorXcd d0 = init ? init->d
                             : pressure_matching(G, a_des.cast<Complex>(), A, cfg.gamma, cfg.alpha);
  Eigen::VectorXcd lambda0 = init ? init->lambda : Eigen::VectorXcd::Zero(I);
  if (d0.size() != L || lambda0.size() != I)
    throw std::invalid_argument("amplitude_matching_admm: init state shape mismatch");

  AdmmState best = detail::admm_single_run(G, a_des, A, cfg, ldlt, M, d0, lambda0);
  double best_cost = cost_amplitude(G, a_des, A, cfg.gamma, cfg.alpha, best.d);

  if (cfg.restarts > 0 && !init) {
    const int pool = cfg.restart_candidates > 0 ? cfg.restart_candidates : 1000 * cfg.restarts;
    const double scale = std::max(1e-12, d0.norm());
    std::mt19937 rng(0x5eedu);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::pair<double, Eigen::VectorXcd>> shortlist;
    for (int s = 0; s < pool; ++s) {
      const double mult = std::pow(4.0, (s % 5) - 2);  // scales 1/16 .. 16
      Eigen::VectorXcd cand(L);
      for (Eigen::Index l = 0; l < L; ++l) cand(l) = Complex(normal(rng), normal(rng));
      cand *= mult * scale / std::sqrt(2.0 * static_cast<double>(L));
      const double c = cost_amplitude(G, a_des, A, cfg.gamma, cfg.alpha, cand);
      if (shortlist.size() < static_cast<std::size_t>(cfg.restarts)) {
        shortlist.emplace_back(c, std::move(cand));
        std::sort(shortlist.begin(), shortlist.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
      } else if (c < shortlist.back().first) {
        shortlist.back() = {c, std::move(cand)};
        std::sort(shortlist.begin(), shortlist.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
      }
    }
    for (auto& [c0, cand] : shortlist) {
      AdmmState run = detail::admm_single_run(G, a_des, A, cfg, ldlt, M, cand,
                                              Eigen::VectorXcd::Zero(I));
      const double c = cost_amplitude(G, a_des, A, cfg.gamma, cfg.alpha, run.d);
      if (c < best_cost) {
        best_cost = c;
        best = std::move(run);
      }
    }
  }

  Eigen::VectorXcd d = best.d;
  return {std::move(d), std::move(best)};
}

}  // namespace sfs
