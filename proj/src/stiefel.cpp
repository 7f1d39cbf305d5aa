#include "rfpca/stiefel.hpp"

#include <random>
#include <string>

#include "rfpca/errors.hpp"

namespace rfpca {

namespace {

Eigen::MatrixXd polar_orthonormalize(const Eigen::MatrixXd& A) {
  // A (A^T A)^{-1/2}; the Gram matrix is p x p and has eigenvalues >= 0.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.transpose() * A);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] <= 0.0) {
      throw numerical_error("polar_orthonormalize: rank-deficient input");
    }
    ev[i] = 1.0 / std::sqrt(ev[i]);
  }
  return A * (es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose());
}

void check_tangent_shape(const StiefelPoint& U, const Eigen::MatrixXd& D,
                         const char* what) {
  if (D.rows() != U.rows() || D.cols() != U.cols()) {
    throw validation_error(std::string(what) + ": shape mismatch");
  }
}

}  // namespace

double orthonormality_residual(const Eigen::MatrixXd& U) {
  return (U.transpose() * U -
          Eigen::MatrixXd::Identity(U.cols(), U.cols()))
      .norm();
}

StiefelPoint::StiefelPoint(Eigen::MatrixXd u) : u_(std::move(u)) {
  if (u_.cols() > u_.rows()) {
    throw validation_error("StiefelPoint: more columns than rows");
  }
  const double res = orthonormality_residual(u_);
  if (res > 1e-6) {
    throw validation_error("StiefelPoint: orthonormality residual " +
                           std::to_string(res) + " too large");
  }
  if (res > 1e-10) {
    u_ = polar_orthonormalize(u_);
  }
}

double StiefelPoint::projector_inner(const Eigen::MatrixXd& M) const {
  double t = 0.0;
  for (Eigen::Index j = 0; j < u_.cols(); ++j) {
    t += u_.col(j).dot(M * u_.col(j));
  }
  return t;
}

StiefelPoint random_point(int d, int p, std::uint64_t seed) {
  if (p < 1 || p > d) throw validation_error("random_point: need 1 <= p <= d");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd G(d, p);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) G(i, j) = gauss(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, p);
  Eigen::MatrixXd R = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  }
  return StiefelPoint(std::move(Q));
}

Eigen::MatrixXd project_tangent(const StiefelPoint& U, const Eigen::MatrixXd& D) {
  check_tangent_shape(U, D, "project_tangent");
  const Eigen::MatrixXd& u = U.matrix();
  Eigen::MatrixXd UtD = u.transpose() * D;
  return D - u * UtD + 0.5 * u * (UtD - UtD.transpose());
}

StiefelPoint retract_qf(const StiefelPoint& U, const Eigen::MatrixXd& delta) {
  check_tangent_shape(U, delta, "retract_qf");
  Eigen::MatrixXd A = U.matrix() + delta;
  const Eigen::Index p = A.cols();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd R = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (std::abs(R(j, j)) < 1e-12 * std::max(1.0, A.col(j).norm())) {
      throw numerical_error("retract_qf: U + delta is rank deficient");
    }
  }
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(A.rows(), p);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  }
  return StiefelPoint(std::move(Q));
}

StiefelPoint retract_polar(const StiefelPoint& U, const Eigen::MatrixXd& delta) {
  check_tangent_shape(U, delta, "retract_polar");
  Eigen::MatrixXd A = U.matrix() + delta;
  const Eigen::Index p = A.cols();
  // I + D^T D has eigenvalues >= 1, so the inverse square root is stable.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      Eigen::MatrixXd::Identity(p, p) + delta.transpose() * delta);
  Eigen::VectorXd ev = es.eigenvalues().array().rsqrt();
  return StiefelPoint(A * (es.eigenvectors() * ev.asDiagonal() *
                           es.eigenvectors().transpose()));
}

}  // namespace rfpca
