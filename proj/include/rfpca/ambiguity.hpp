#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "rfpca/dataset.hpp"

namespace rfpca {

/// Robustness configuration: fairness penalty, per-group ambiguity radii and
/// the target dimension k of the projection.
struct RobustConfig {
  double lambda = 0.0;
  Eigen::VectorXd epsilon;  // one radius per group, >= 0
  int k = 1;
};

/// Per-group validity report for the closed-form reformulation. A
/// configuration is usable when, for every group, the probability bound (i)
/// or the eigenvalue bound (ii) holds.
struct ConditionReport {
  struct PerGroup {
    bool prob_bound = false;  // 0 <= lambda <= p_a
    bool eig_bound = false;   // sum of d-k smallest eigenvalues of M_a >= eps_a
    double eig_sum = 0.0;
  };
  std::vector<PerGroup> groups;
  bool valid = false;
};

/// Scalar and matrix coefficients of the binary worst-case objective:
/// F_a(U) = kappa[a] + theta[a] sqrt(<UU^T, M_a>)
///        + vartheta[a'] sqrt(<UU^T, M_{a'}>) + <UU^T, C[a]>.
struct ReformParams {
  std::array<double, 2> kappa{};
  std::array<double, 2> theta{};     // theta[a]    = 2 |p_a + lambda| sqrt(eps_a)
  std::array<double, 2> vartheta{};  // vartheta[a] = 2 |p_a - lambda| sqrt(eps_a)
  std::array<Eigen::MatrixXd, 2> C;
  std::array<Eigen::MatrixXd, 2> m2;
  std::array<double, 2> p{};
  std::array<double, 2> epsilon{};
  double lambda = 0.0;
  int k = 1;
  ConditionReport conditions;

  int dim() const { return static_cast<int>(m2[0].rows()); }
};

/// Squared Bures-Wasserstein-style discrepancy between two moment pairs:
/// ||mu1 - mu2||^2 + tr(S1 + S2 - 2 (S2^{1/2} S1 S2^{1/2})^{1/2}).
double w_divergence(const Eigen::VectorXd& mu1, const Eigen::MatrixXd& sigma1,
                    const Eigen::VectorXd& mu2, const Eigen::MatrixXd& sigma2);

/// Closed form of sup { upsilon * E_Q[l(V,X)] : W(Q, P) <= eps } where P is
/// the complement projector I - VV^T. Three cases on the sign of upsilon and
/// on t = <P, M> vs eps.
double worst_case_expectation(double upsilon, double eps, const Eigen::MatrixXd& M,
                              const Eigen::MatrixXd& P);

ConditionReport check_conditions(const GroupMoments& gm, const RobustConfig& cfg);

/// Builds the binary reformulation coefficients. Constructible even for
/// invalid condition reports (the solver refuses those); requires m = 2.
ReformParams reform_params(const GroupMoments& gm, const RobustConfig& cfg);

/// Radius parametrization eps_a = alpha / sqrt(N_a).
Eigen::VectorXd radii_from_alpha(double alpha, const GroupMoments& gm);

}  // namespace rfpca
