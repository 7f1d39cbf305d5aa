#include "rfpca/solver.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "rfpca/errors.hpp"

namespace rfpca {

namespace {

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  // splitmix64 over (seed, restart) so restarts get decorrelated streams.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(restart) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void refuse_invalid(const ConditionReport& rep, double lambda) {
  if (rep.valid) return;
  std::string msg = "solve: reformulation conditions fail (lambda = " +
                    std::to_string(lambda) + "):";
  for (std::size_t a = 0; a < rep.groups.size(); ++a) {
    const auto& g = rep.groups[a];
    if (!g.prob_bound && !g.eig_bound) {
      msg += " group " + std::to_string(a) +
             " violates both the probability bound and the eigenvalue bound "
             "(tail eigenvalue sum " +
             std::to_string(g.eig_sum) + ");";
    }
  }
  throw condition_error(msg);
}

}  // namespace

SolveReport solve_objective(const ManifoldObjective& obj, const SolverOptions& opts) {
  if (opts.iterations < 1 || opts.restarts < 1) {
    throw validation_error("solve: iterations and restarts must be >= 1");
  }
  if (obj.p < 1 || obj.p > obj.d) {
    throw validation_error("solve: need 1 <= d-k <= d");
  }
  const double step = opts.step_override
                          ? *opts.step_override
                          : 1.0 / std::sqrt(static_cast<double>(opts.iterations) + 1.0);
  if (step <= 0) throw validation_error("solve: step must be positive");

  const auto t_start = std::chrono::steady_clock::now();
  SolveReport report;
  report.traces.resize(opts.restarts);

  for (int r = 0; r < opts.restarts; ++r) {
    RestartTrace& trace = report.traces[r];
    StiefelPoint u = random_point(obj.d, obj.p, restart_seed(opts.seed, r));
    trace.best_value = obj.value(u);
    trace.best_point = u;
    trace.objective.push_back(trace.best_value);

    for (int t = 0; t < opts.iterations; ++t) {
      trace.active_branch.push_back(obj.active(u));
      Eigen::MatrixXd delta = obj.subgradient(u);
      trace.grad_norm.push_back(delta.norm());
      u = opts.retraction == Retraction::polar ? retract_polar(u, -step * delta)
                                               : retract_qf(u, -step * delta);
      const double f = obj.value(u);
      trace.objective.push_back(f);
      if (f < trace.best_value) {
        trace.best_value = f;
        trace.best_point = u;
      }
    }
  }

  report.best_restart = 0;
  report.best_value = report.traces[0].best_value;
  for (int r = 1; r < opts.restarts; ++r) {
    if (report.traces[r].best_value < report.best_value) {
      report.best_value = report.traces[r].best_value;
      report.best_restart = r;
    }
  }
  report.best_point = report.traces[report.best_restart].best_point;
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

SolveReport solve(const ReformParams& rp, const SolverOptions& opts) {
  refuse_invalid(rp.conditions, rp.lambda);
  ManifoldObjective obj;
  obj.d = rp.dim();
  obj.p = rp.dim() - rp.k;
  obj.value = [&rp](const StiefelPoint& u) { return eval_F(u, rp).value; };
  obj.subgradient = [&rp](const StiefelPoint& u) {
    return riemannian_subgradient(u, rp);
  };
  obj.active = [&rp](const StiefelPoint& u) { return eval_F(u, rp).active_branch; };
  return solve_objective(obj, opts);
}

SolveReport solve(const PairParams& pp, const SolverOptions& opts) {
  refuse_invalid(pp.conditions, pp.lambda);
  ManifoldObjective obj;
  obj.d = pp.dim();
  obj.p = pp.dim() - pp.k;
  obj.value = [&pp](const StiefelPoint& u) { return eval_F_multi(u, pp).value; };
  obj.subgradient = [&pp](const StiefelPoint& u) {
    return riemannian_subgradient_multi(u, pp);
  };
  obj.active = [&pp](const StiefelPoint& u) {
    const auto pr = eval_F_multi(u, pp).active_pair;
    return pr.first * pp.m + pr.second;
  };
  return solve_objective(obj, opts);
}

double convergence_proxy(const SolveReport& report) {
  const auto& norms = report.traces.at(report.best_restart).grad_norm;
  if (norms.empty()) throw validation_error("convergence_proxy: empty gradient trace");
  double best = norms[0];
  for (double g : norms) best = std::min(best, g);
  return best;
}

}  // namespace rfpca
