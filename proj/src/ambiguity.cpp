#include "rfpca/ambiguity.hpp"

#include <cmath>
#include <string>

#include "rfpca/errors.hpp"
#include "rfpca/linalg.hpp"

namespace rfpca {

double w_divergence(const Eigen::VectorXd& mu1, const Eigen::MatrixXd& sigma1,
                    const Eigen::VectorXd& mu2, const Eigen::MatrixXd& sigma2) {
  const Eigen::Index d = mu1.size();
  if (mu2.size() != d || sigma1.rows() != d || sigma1.cols() != d ||
      sigma2.rows() != d || sigma2.cols() != d) {
    throw validation_error("w_divergence: dimension mismatch");
  }
  require_psd(sigma1, 1e-9, "w_divergence: sigma1");
  require_psd(sigma2, 1e-9, "w_divergence: sigma2");

  const Eigen::MatrixXd root2 = psd_sqrt(sigma2);
  const Eigen::MatrixXd cross = psd_sqrt(root2 * sigma1 * root2);
  double w = (mu1 - mu2).squaredNorm() + sigma1.trace() + sigma2.trace() -
             2.0 * cross.trace();
  return std::max(w, 0.0);
}

double worst_case_expectation(double upsilon, double eps, const Eigen::MatrixXd& M,
                              const Eigen::MatrixXd& P) {
  if (eps < 0) throw validation_error("worst_case_expectation: negative radius");
  if (P.rows() != P.cols() || P.rows() != M.rows()) {
    throw validation_error("worst_case_expectation: dimension mismatch");
  }
  if ((P * P - P).norm() > 1e-8 || asymmetry(P) > 1e-8) {
    throw validation_error("worst_case_expectation: P is not an orthogonal projector");
  }
  const double t = std::max((P * M).trace(), 0.0);
  const double st = std::sqrt(t);
  const double se = std::sqrt(eps);
  if (upsilon >= 0.0) return upsilon * (st + se) * (st + se);
  if (t >= eps) return upsilon * (st - se) * (st - se);
  return 0.0;
}

ConditionReport check_conditions(const GroupMoments& gm, const RobustConfig& cfg) {
  const int m = gm.num_groups();
  const auto d = gm.dim();
  if (cfg.k < 1 || cfg.k >= d) {
    throw validation_error("check_conditions: need 1 <= k <= d-1");
  }
  if (cfg.epsilon.size() != m) {
    throw validation_error("check_conditions: epsilon has " +
                           std::to_string(cfg.epsilon.size()) + " entries for " +
                           std::to_string(m) + " groups");
  }
  ConditionReport rep;
  rep.valid = true;
  for (int a = 0; a < m; ++a) {
    ConditionReport::PerGroup g;
    g.prob_bound = cfg.lambda >= 0.0 && cfg.lambda <= gm.p[a];
    Eigen::VectorXd ev = sym_eigenvalues(gm.m2[a]);  // ascending
    g.eig_sum = ev.head(d - cfg.k).sum();
    g.eig_bound = g.eig_sum >= cfg.epsilon[a];
    rep.valid = rep.valid && (g.prob_bound || g.eig_bound);
    rep.groups.push_back(g);
  }
  return rep;
}

ReformParams reform_params(const GroupMoments& gm, const RobustConfig& cfg) {
  if (gm.num_groups() != 2) {
    throw validation_error(
        "reform_params: binary formulation needs exactly 2 groups; use the "
        "multi-group path for m > 2");
  }
  if (cfg.lambda < 0) throw validation_error("reform_params: lambda must be >= 0");
  if ((cfg.epsilon.array() < 0).any()) {
    throw validation_error("reform_params: radii must be >= 0");
  }
  ReformParams rp;
  rp.lambda = cfg.lambda;
  rp.k = cfg.k;
  rp.conditions = check_conditions(gm, cfg);
  for (int a = 0; a < 2; ++a) {
    const int b = 1 - a;
    rp.p[a] = gm.p[a];
    rp.epsilon[a] = cfg.epsilon[a];
    rp.m2[a] = gm.m2[a];
    rp.kappa[a] = (gm.p[a] + cfg.lambda) * cfg.epsilon[a] +
                  (gm.p[b] - cfg.lambda) * cfg.epsilon[b];
    rp.theta[a] = 2.0 * std::abs(gm.p[a] + cfg.lambda) * std::sqrt(cfg.epsilon[a]);
    rp.vartheta[a] = 2.0 * std::abs(gm.p[a] - cfg.lambda) * std::sqrt(cfg.epsilon[a]);
    rp.C[a] = (gm.p[a] + cfg.lambda) * gm.m2[a] + (gm.p[b] - cfg.lambda) * gm.m2[b];
  }
  return rp;
}

Eigen::VectorXd radii_from_alpha(double alpha, const GroupMoments& gm) {
  if (alpha < 0) throw validation_error("radii_from_alpha: alpha must be >= 0");
  Eigen::VectorXd eps(gm.num_groups());
  for (int a = 0; a < gm.num_groups(); ++a) {
    eps[a] = alpha / std::sqrt(static_cast<double>(gm.counts[a]));
  }
  return eps;
}

}  // namespace rfpca
