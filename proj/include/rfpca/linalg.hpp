#pragma once

#include <Eigen/Dense>

namespace rfpca {

// Symmetric PSD square root via eigendecomposition. Eigenvalues in
// [-tol, 0) are clamped to zero; anything more negative is an error.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& M, double tol = 1e-9);

// Ascending eigenvalues of a symmetric matrix.
Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& M);

double max_eigenvalue(const Eigen::MatrixXd& M);
double min_eigenvalue(const Eigen::MatrixXd& M);

// Largest |residual| of M - M^T, used for symmetry validation.
double asymmetry(const Eigen::MatrixXd& M);

// Throws numerical_error if M is not symmetric PSD within tol.
void require_psd(const Eigen::MatrixXd& M, double tol, const char* what);

}  // namespace rfpca
