#include "rfpca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "rfpca/errors.hpp"
#include "rfpca/linalg.hpp"

namespace rfpca {

namespace {

void fix_column_signs(Eigen::MatrixXd& V) {
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    Eigen::Index imax;
    V.col(j).cwiseAbs().maxCoeff(&imax);
    if (V(imax, j) < 0) V.col(j) = -V.col(j);
  }
}

}  // namespace

double reconstruction_loss(const Projection& V, const Eigen::VectorXd& x) {
  if (x.size() != V.V.rows()) {
    throw validation_error("reconstruction_loss: dimension mismatch");
  }
  const double loss = x.squaredNorm() - (V.V.transpose() * x).squaredNorm();
  return std::max(loss, 0.0);
}

Projection nominal_pca(const Eigen::MatrixXd& second_moment, int k) {
  const Eigen::Index d = second_moment.rows();
  if (k < 1 || k >= d) throw validation_error("nominal_pca: need 1 <= k < d");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(second_moment);
  Projection out;
  out.V.resize(d, k);
  // Eigen returns eigenvalues ascending; take the top k in descending order.
  for (int j = 0; j < k; ++j) out.V.col(j) = es.eigenvectors().col(d - 1 - j);
  fix_column_signs(out.V);
  out.tag = Provenance::nominal_pca;
  return out;
}

Projection complement_projection(const StiefelPoint& U) {
  const Eigen::Index d = U.rows();
  const Eigen::Index k = d - U.cols();
  // Columns of V: eigenvectors of I - UU^T with eigenvalue 1.
  Eigen::MatrixXd P =
      Eigen::MatrixXd::Identity(d, d) - U.matrix() * U.matrix().transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  Projection out;
  out.V = es.eigenvectors().rightCols(k);
  fix_column_signs(out.V);
  out.tag = Provenance::robust_fair;
  return out;
}

FairnessReport evaluate(const Projection& V, const Dataset& ds) {
  if (ds.dim() != V.V.rows()) throw validation_error("evaluate: dimension mismatch");
  const int m = ds.num_groups;
  std::vector<double> sums(m, 0.0);
  std::vector<Eigen::Index> counts(m, 0);
  double total = 0.0;
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    const double loss = reconstruction_loss(V, ds.X.row(i).transpose());
    sums[ds.A[i]] += loss;
    counts[ds.A[i]]++;
    total += loss;
  }
  FairnessReport rep;
  rep.are = total / static_cast<double>(ds.n());
  rep.group_errors.resize(m);
  for (int a = 0; a < m; ++a) {
    if (counts[a] == 0) {
      throw validation_error("evaluate: group " + std::to_string(a) + " is empty");
    }
    rep.group_errors[a] = sums[a] / static_cast<double>(counts[a]);
  }
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      rep.abdiff = std::max(rep.abdiff,
                            std::abs(rep.group_errors[a] - rep.group_errors[b]));
    }
  }
  rep.unfairness = rep.abdiff;
  return rep;
}

FairSubspaceResult fair_projection_test(const Eigen::MatrixXd& S, int k) {
  const Eigen::Index d = S.rows();
  if (S.cols() != d) throw validation_error("fair_projection_test: S not square");
  if (asymmetry(S) > 1e-9) {
    throw validation_error("fair_projection_test: S is not symmetric");
  }
  if (k < 1 || k >= d) throw validation_error("fair_projection_test: need 1 <= k < d");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
  const Eigen::VectorXd ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  const double tol = 1e-8 * std::max(scale, 1e-300);

  int rank = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(ev[i]) > tol) ++rank;
  }
  FairSubspaceResult out;
  out.exists = rank <= k;
  if (!out.exists) return out;

  // Order eigenvectors by |eigenvalue|; the d-k smallest span U, the rest V.
  std::vector<Eigen::Index> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return std::abs(ev[i]) < std::abs(ev[j]);
  });
  Projection V;
  V.V.resize(d, k);
  for (int j = 0; j < k; ++j) V.V.col(j) = es.eigenvectors().col(order[d - k + j]);
  fix_column_signs(V.V);
  V.tag = Provenance::external;
  out.V = V;
  return out;
}

std::string report_to_json(const FairnessReport& rep) {
  nlohmann::json j;
  j["are"] = rep.are;
  j["group_errors"] = rep.group_errors;
  j["abdiff"] = rep.abdiff;
  j["unfairness"] = rep.unfairness;
  return j.dump(2);
}

}  // namespace rfpca
