#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace rfpca {

/// A d x p matrix with orthonormal columns. The constructor validates the
/// invariant U^T U = I; mild drift (residual in (1e-10, 1e-6]) is repaired
/// with one polar pass, larger residuals are rejected.
class StiefelPoint {
 public:
  StiefelPoint() = default;
  explicit StiefelPoint(Eigen::MatrixXd u);

  const Eigen::MatrixXd& matrix() const { return u_; }
  Eigen::Index rows() const { return u_.rows(); }
  Eigen::Index cols() const { return u_.cols(); }

  /// The complement projector I - VV^T = UU^T applied implicitly: <UU^T, M>
  /// computed as sum_j u_j^T M u_j without materializing UU^T.
  double projector_inner(const Eigen::MatrixXd& M) const;

 private:
  Eigen::MatrixXd u_;
};

double orthonormality_residual(const Eigen::MatrixXd& U);

/// Q-factor of a d x p standard normal matrix; deterministic per seed.
StiefelPoint random_point(int d, int p, std::uint64_t seed);

/// Orthogonal projection onto the tangent space at U:
/// (I - UU^T) D + U (U^T D - D^T U) / 2.
Eigen::MatrixXd project_tangent(const StiefelPoint& U, const Eigen::MatrixXd& D);

/// QR retraction, Q-factor with nonnegative-diagonal R convention.
StiefelPoint retract_qf(const StiefelPoint& U, const Eigen::MatrixXd& delta);

/// Polar retraction (U + D)(I + D^T D)^{-1/2} via eigendecomposition of the
/// p x p Gram matrix.
StiefelPoint retract_polar(const StiefelPoint& U, const Eigen::MatrixXd& delta);

}  // namespace rfpca
