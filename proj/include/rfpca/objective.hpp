#pragma once

#include <Eigen/Dense>
#include <array>

#include "rfpca/ambiguity.hpp"
#include "rfpca/stiefel.hpp"

namespace rfpca {

struct ObjectiveEval {
  double value = 0.0;
  int active_branch = 0;  // argmax over {F_0, F_1}, ties broken to 0
  std::array<double, 2> branch_values{};
};

/// F(U) = max{F_0(U), F_1(U)} with
/// F_a(U) = kappa_a + theta_a sqrt(<UU^T, M_a>) + vartheta_{a'} sqrt(<UU^T, M_{a'}>)
///        + <UU^T, C_a>.
ObjectiveEval eval_F(const StiefelPoint& U, const ReformParams& rp);

/// Riemannian subgradient of F at U: the tangent projection of the Euclidean
/// subgradient of the active branch. Since the Euclidean gradient has the
/// form SU with S symmetric, the projection reduces to (I - UU^T) S U.
Eigen::MatrixXd riemannian_subgradient(const StiefelPoint& U, const ReformParams& rp);

/// Lipschitz constant of F on the manifold: the six-term maximum over
/// theta_a s_max(M_a)/sqrt(s_min(M_a)), vartheta_a s_max(M_a)/sqrt(s_min(M_a))
/// and 2 sqrt(d-k) s_max(C_a).
double lipschitz_constant(const ReformParams& rp, int d, int k);

}  // namespace rfpca
