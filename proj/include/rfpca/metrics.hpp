#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "rfpca/dataset.hpp"
#include "rfpca/stiefel.hpp"

namespace rfpca {

enum class Provenance { robust_fair, nominal_pca, external };

/// A d x k orthonormal projection basis.
struct Projection {
  Eigen::MatrixXd V;
  Provenance tag = Provenance::external;
};

/// Reconstruction-error summary of one projection on one split.
struct FairnessReport {
  double are = 0.0;                  // mean loss over all samples
  std::vector<double> group_errors;  // per-group mean loss
  double abdiff = 0.0;               // max pairwise |gap|
  double unfairness = 0.0;           // equals abdiff (binary U, multi-group U_max)
};

/// l(V, x) = ||x - VV^T x||^2 = ||x||^2 - ||V^T x||^2.
double reconstruction_loss(const Projection& V, const Eigen::VectorXd& x);

/// Top-k eigenvectors of a PSD second-moment matrix, eigenvalues descending,
/// sign fixed so the largest-magnitude entry of each column is positive.
Projection nominal_pca(const Eigen::MatrixXd& second_moment, int k);

/// Orthonormal complement of the solver's U, tagged robust_fair.
Projection complement_projection(const StiefelPoint& U);

FairnessReport evaluate(const Projection& V, const Dataset& ds);

struct FairSubspaceResult {
  bool exists = false;
  std::optional<Projection> V;
};

/// Rank test for the existence of a perfectly fair k-dimensional projection
/// for the moment-gap matrix S, with the constructive subspace when it
/// exists: U spans d-k eigenvectors of (near-)zero eigenvalues, V is its
/// complement, so <I - VV^T, S> = 0.
FairSubspaceResult fair_projection_test(const Eigen::MatrixXd& S, int k);

std::string report_to_json(const FairnessReport& rep);

}  // namespace rfpca
