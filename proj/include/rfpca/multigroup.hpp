#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "rfpca/ambiguity.hpp"
#include "rfpca/stiefel.hpp"

namespace rfpca {

/// Coefficients of the m-group worst-case objective. Per ordered pair
/// (a, a') the branch value is
///   sum_b p_b (<UU^T, M_b> + eps_b)
/// + sum_b 2 c(a,a',b) sqrt(eps_b <UU^T, M_b>)
/// + lambda (<UU^T, M_a - M_{a'}> + eps_a - eps_{a'}),
/// with the V-dependent common term included so the argmin is preserved.
/// Moments are shared across pairs; memory stays O(m d^2).
struct PairParams {
  int m = 0;
  int k = 1;
  double lambda = 0.0;
  Eigen::VectorXd p;
  Eigen::VectorXd epsilon;
  std::vector<Eigen::MatrixXd> m2;
  ConditionReport conditions;

  double coeff(int a, int aprime, int b) const {
    if (b == a) return p[a] + lambda;
    if (b == aprime) return std::abs(p[aprime] - lambda);
    return p[b];
  }
  int dim() const { return static_cast<int>(m2.empty() ? 0 : m2[0].rows()); }
};

struct MultiEval {
  double value = 0.0;
  std::pair<int, int> active_pair{0, 1};  // lexicographic tie-break
};

PairParams pair_params(const GroupMoments& gm, const RobustConfig& cfg);

MultiEval eval_F_multi(const StiefelPoint& U, const PairParams& pp);

Eigen::MatrixXd riemannian_subgradient_multi(const StiefelPoint& U,
                                             const PairParams& pp);

}  // namespace rfpca
