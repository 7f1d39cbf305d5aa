#include "rfpca/linalg.hpp"

#include <string>

#include "rfpca/errors.hpp"

namespace rfpca {

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& M, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -tol) {
      throw numerical_error("psd_sqrt: eigenvalue " + std::to_string(ev[i]) +
                            " below -tolerance");
    }
    ev[i] = ev[i] > 0.0 ? std::sqrt(ev[i]) : 0.0;
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double max_eigenvalue(const Eigen::MatrixXd& M) {
  Eigen::VectorXd ev = sym_eigenvalues(M);
  return ev[ev.size() - 1];
}

double min_eigenvalue(const Eigen::MatrixXd& M) { return sym_eigenvalues(M)[0]; }

double asymmetry(const Eigen::MatrixXd& M) {
  return (M - M.transpose()).cwiseAbs().maxCoeff();
}

void require_psd(const Eigen::MatrixXd& M, double tol, const char* what) {
  if (M.rows() != M.cols() || asymmetry(M) > tol) {
    throw numerical_error(std::string(what) + ": matrix is not symmetric");
  }
  double lo = min_eigenvalue(0.5 * (M + M.transpose()));
  if (lo < -tol) {
    throw numerical_error(std::string(what) + ": matrix is not PSD (min eigenvalue " +
                          std::to_string(lo) + ")");
  }
}

}  // namespace rfpca
