#include "rfpca/multigroup.hpp"

#include <cmath>
#include <string>

#include "rfpca/errors.hpp"

namespace rfpca {

namespace {

constexpr double kSqrtFloor = 1e-12;

struct BranchTerms {
  std::vector<double> t;   // <UU^T, M_b>
  std::vector<double> st;  // sqrt(t_b)
  double common = 0.0;     // sum_b p_b (t_b + eps_b)
};

BranchTerms branch_terms(const StiefelPoint& U, const PairParams& pp) {
  BranchTerms bt;
  bt.t.resize(pp.m);
  bt.st.resize(pp.m);
  for (int b = 0; b < pp.m; ++b) {
    double t = U.projector_inner(pp.m2[b]);
    if (t < -1e-12) {
      throw numerical_error("eval_F_multi: negative value under square root");
    }
    bt.t[b] = std::max(t, 0.0);
    bt.st[b] = std::sqrt(bt.t[b]);
    bt.common += pp.p[b] * (bt.t[b] + pp.epsilon[b]);
  }
  return bt;
}

double pair_value(const PairParams& pp, const BranchTerms& bt, int a, int a2) {
  double v = bt.common + pp.lambda * (bt.t[a] - bt.t[a2] + pp.epsilon[a] - pp.epsilon[a2]);
  for (int b = 0; b < pp.m; ++b) {
    v += 2.0 * pp.coeff(a, a2, b) * std::sqrt(pp.epsilon[b]) * bt.st[b];
  }
  return v;
}

void check_point(const StiefelPoint& U, const PairParams& pp, const char* what) {
  if (U.rows() != pp.dim() || U.cols() != pp.dim() - pp.k) {
    throw validation_error(std::string(what) + ": U has wrong shape");
  }
  if (orthonormality_residual(U.matrix()) > 1e-8) {
    throw validation_error(std::string(what) + ": U is not orthonormal");
  }
}

}  // namespace

PairParams pair_params(const GroupMoments& gm, const RobustConfig& cfg) {
  if (gm.num_groups() < 2) {
    throw validation_error("pair_params: need at least 2 groups");
  }
  if (cfg.lambda < 0) throw validation_error("pair_params: lambda must be >= 0");
  if ((cfg.epsilon.array() < 0).any()) {
    throw validation_error("pair_params: radii must be >= 0");
  }
  PairParams pp;
  pp.m = gm.num_groups();
  pp.k = cfg.k;
  pp.lambda = cfg.lambda;
  pp.p = gm.p;
  pp.epsilon = cfg.epsilon;
  pp.m2 = gm.m2;
  pp.conditions = check_conditions(gm, cfg);
  return pp;
}

MultiEval eval_F_multi(const StiefelPoint& U, const PairParams& pp) {
  check_point(U, pp, "eval_F_multi");
  const BranchTerms bt = branch_terms(U, pp);
  MultiEval out;
  bool first = true;
  for (int a = 0; a < pp.m; ++a) {
    for (int a2 = 0; a2 < pp.m; ++a2) {
      if (a == a2) continue;
      const double v = pair_value(pp, bt, a, a2);
      if (first || v > out.value) {
        out.value = v;
        out.active_pair = {a, a2};
        first = false;
      }
    }
  }
  return out;
}

Eigen::MatrixXd riemannian_subgradient_multi(const StiefelPoint& U,
                                             const PairParams& pp) {
  check_point(U, pp, "riemannian_subgradient_multi");
  const MultiEval ev = eval_F_multi(U, pp);
  const auto [a, a2] = ev.active_pair;
  const Eigen::MatrixXd& u = U.matrix();
  const BranchTerms bt = branch_terms(U, pp);

  // d/dU of the active pair's branch: each t_b contributes 2 M_b U times the
  // scalar coefficient of t_b in the branch expression.
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(u.rows(), u.cols());
  for (int b = 0; b < pp.m; ++b) {
    double scale = pp.p[b];
    if (b == a) scale += pp.lambda;
    if (b == a2) scale -= pp.lambda;
    const double c = pp.coeff(a, a2, b);
    if (c != 0.0 && pp.epsilon[b] > 0.0) {
      if (bt.t[b] < kSqrtFloor) {
        throw numerical_error(
            "riemannian_subgradient_multi: <UU^T, M_" + std::to_string(b) +
            "> is below the square-root floor with a nonzero radius coefficient");
      }
      scale += c * std::sqrt(pp.epsilon[b]) / bt.st[b];
    }
    if (scale != 0.0) G.noalias() += (2.0 * scale) * (pp.m2[b] * u);
  }
  return G - u * (u.transpose() * G);
}

}  // namespace rfpca
