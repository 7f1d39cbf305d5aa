#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rfpca/ambiguity.hpp"
#include "rfpca/multigroup.hpp"
#include "rfpca/objective.hpp"
#include "rfpca/stiefel.hpp"

namespace rfpca {

enum class Retraction { qf, polar };

struct SolverOptions {
  int iterations = 1000;
  int restarts = 20;
  Retraction retraction = Retraction::polar;
  std::uint64_t seed = 0;
  // Constant step; defaults to 1/sqrt(iterations + 1) when unset.
  std::optional<double> step_override;
};

struct RestartTrace {
  std::vector<double> objective;   // F(U_t), t = 0..tau
  std::vector<double> grad_norm;   // ||Delta_t||_F, t = 0..tau-1
  std::vector<int> active_branch;  // a_t (pair index a*m+a' for m > 2)
  double best_value = 0.0;
  StiefelPoint best_point;
};

struct SolveReport {
  StiefelPoint best_point;
  double best_value = 0.0;
  int best_restart = 0;
  std::vector<RestartTrace> traces;
  double seconds = 0.0;
};

/// Objective seen by the descent loop: value + subgradient callbacks over a
/// d x (d-k) Stiefel manifold. active() is recorded for diagnostics.
struct ManifoldObjective {
  int d = 0;
  int p = 0;  // d - k
  std::function<double(const StiefelPoint&)> value;
  std::function<Eigen::MatrixXd(const StiefelPoint&)> subgradient;
  std::function<int(const StiefelPoint&)> active;
};

/// Constant-step Riemannian subgradient descent with independent restarts.
/// Per-restart randomness is derived from (seed, restart index), so the
/// result does not depend on execution order. Returns the best iterate seen
/// across the whole trajectory of every restart, not the final one.
SolveReport solve_objective(const ManifoldObjective& obj, const SolverOptions& opts);

/// Binary solver; refuses invalid condition reports.
SolveReport solve(const ReformParams& rp, const SolverOptions& opts);

/// Multi-group solver; refuses invalid condition reports.
SolveReport solve(const PairParams& pp, const SolverOptions& opts);

/// min_t ||Delta_t||_F over the best restart's trace.
double convergence_proxy(const SolveReport& report);

}  // namespace rfpca
