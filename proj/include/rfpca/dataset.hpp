#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rfpca {

/// Centered-or-raw sample matrix with one sensitive attribute label per row.
/// Labels are remapped to 0..m-1 in first-appearance order at load time.
struct Dataset {
  Eigen::MatrixXd X;          // N x d, one feature row per sample
  Eigen::VectorXi A;          // N labels in {0, ..., num_groups-1}
  int num_groups = 0;
  bool centered = false;
  Eigen::VectorXd center_vec;  // the subtracted mean (zero vector until centered)
  std::vector<std::string> feature_names;
  std::vector<std::string> group_names;  // original attribute values

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index dim() const { return X.cols(); }
};

/// Per-group empirical moments. Covariance uses the 1/N_a normalization so
/// that m2[a] = (1/N_a) sum_{i in group a} x_i x_i^T.
struct GroupMoments {
  Eigen::VectorXd p;                    // marginal probabilities, sums to 1
  std::vector<Eigen::VectorXd> mu;      // group means
  std::vector<Eigen::MatrixXd> sigma;   // group covariances (biased)
  std::vector<Eigen::MatrixXd> m2;      // group second moments
  std::vector<Eigen::Index> counts;     // N_a

  int num_groups() const { return static_cast<int>(p.size()); }
  Eigen::Index dim() const { return mu.empty() ? 0 : mu[0].size(); }
  Eigen::MatrixXd pooled_second_moment() const;
};

struct CsvOptions {
  char delimiter = ',';
  // Columns with stddev outside [min_std, max_std] are dropped with a warning.
  double min_std = 1e-5;
  double max_std = 1000.0;
};

/// Reads a delimited text file with a header row. The attribute column is
/// selected by name or zero-based index; remaining numeric columns become
/// features unless an explicit feature list is given.
Dataset load_csv(const std::string& path,
                 const std::variant<std::string, int>& attribute_column,
                 const std::vector<std::string>& feature_columns = {},
                 const CsvOptions& opts = {});

/// Subtracts the dataset's own column means, or a supplied vector (used to
/// apply training-set centering to held-out data).
Dataset center(const Dataset& ds,
               std::optional<Eigen::VectorXd> center_vec = std::nullopt);

GroupMoments group_moments(const Dataset& ds);

/// Group-stratified split; every group with at least 2 samples appears in
/// both parts. Returns (train, test) with |train| ~ train_ratio * N.
std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double train_ratio,
                                             std::uint64_t seed);

/// Group-stratified fold assignment for cross validation.
std::vector<std::vector<Eigen::Index>> stratified_folds(const Dataset& ds, int folds,
                                                        std::uint64_t seed);

Dataset take_rows(const Dataset& ds, const std::vector<Eigen::Index>& rows);

}  // namespace rfpca
