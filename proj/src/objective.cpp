#include "rfpca/objective.hpp"

#include <cmath>
#include <string>

#include "rfpca/errors.hpp"
#include "rfpca/linalg.hpp"

namespace rfpca {

namespace {

constexpr double kSqrtFloor = 1e-12;

void check_point(const StiefelPoint& U, const ReformParams& rp, const char* what) {
  if (U.rows() != rp.dim() || U.cols() != rp.dim() - rp.k) {
    throw validation_error(std::string(what) + ": U has wrong shape");
  }
  if (orthonormality_residual(U.matrix()) > 1e-8) {
    throw validation_error(std::string(what) + ": U is not orthonormal");
  }
}

double sqrt_term(double t, const char* what) {
  if (t < -1e-12) {
    throw numerical_error(std::string(what) +
                          ": negative value under square root (non-PSD moment?)");
  }
  return std::sqrt(std::max(t, 0.0));
}

}  // namespace

ObjectiveEval eval_F(const StiefelPoint& U, const ReformParams& rp) {
  check_point(U, rp, "eval_F");
  const double t0 = U.projector_inner(rp.m2[0]);
  const double t1 = U.projector_inner(rp.m2[1]);
  const std::array<double, 2> st{sqrt_term(t0, "eval_F"), sqrt_term(t1, "eval_F")};

  ObjectiveEval out;
  for (int a = 0; a < 2; ++a) {
    const int b = 1 - a;
    out.branch_values[a] = rp.kappa[a] + rp.theta[a] * st[a] + rp.vartheta[b] * st[b] +
                           U.projector_inner(rp.C[a]);
  }
  out.active_branch = out.branch_values[1] > out.branch_values[0] ? 1 : 0;
  out.value = out.branch_values[out.active_branch];
  return out;
}

Eigen::MatrixXd riemannian_subgradient(const StiefelPoint& U, const ReformParams& rp) {
  check_point(U, rp, "riemannian_subgradient");
  const ObjectiveEval ev = eval_F(U, rp);
  const int a = ev.active_branch;
  const int b = 1 - a;
  const Eigen::MatrixXd& u = U.matrix();

  Eigen::MatrixXd G = 2.0 * (rp.C[a] * u);
  const std::array<int, 2> grp{a, b};
  const std::array<double, 2> coef{rp.theta[a], rp.vartheta[b]};
  for (int i = 0; i < 2; ++i) {
    if (coef[i] == 0.0) continue;
    const double t = U.projector_inner(rp.m2[grp[i]]);
    if (t < kSqrtFloor) {
      throw numerical_error(
          "riemannian_subgradient: <UU^T, M_" + std::to_string(grp[i]) +
          "> is below the square-root floor with a nonzero radius coefficient; "
          "the dataset is degenerate for this configuration");
    }
    G.noalias() += (coef[i] / std::sqrt(t)) * (rp.m2[grp[i]] * u);
  }
  // G = SU for symmetric S, so the skew part of the tangent projection vanishes.
  return G - u * (u.transpose() * G);
}

double lipschitz_constant(const ReformParams& rp, int d, int k) {
  if (d != rp.dim() || k != rp.k) {
    throw validation_error("lipschitz_constant: dimensions do not match params");
  }
  double L = 0.0;
  for (int a = 0; a < 2; ++a) {
    const double coef = std::max(rp.theta[a], rp.vartheta[a]);
    if (coef > 0.0) {
      const double smin = min_eigenvalue(rp.m2[a]);
      if (smin <= 0.0) {
        throw numerical_error(
            "lipschitz_constant: M_" + std::to_string(a) +
            " is singular with a nonzero radius coefficient; L is undefined");
      }
      L = std::max(L, coef * max_eigenvalue(rp.m2[a]) / std::sqrt(smin));
    }
    // Spectral norm; C_a can be indefinite when lambda > p_{a'}.
    Eigen::VectorXd cev = sym_eigenvalues(rp.C[a]);
    const double spec = std::max(std::abs(cev[0]), std::abs(cev[cev.size() - 1]));
    L = std::max(L, 2.0 * std::sqrt(static_cast<double>(d - k)) * spec);
  }
  return L;
}

}  // namespace rfpca
