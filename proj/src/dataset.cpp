#include "rfpca/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "rfpca/errors.hpp"

namespace rfpca {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, delim)) {
    // trim whitespace and a possible trailing \r
    auto b = cell.find_first_not_of(" \t\r\n");
    auto e = cell.find_last_not_of(" \t\r\n");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == delim) cells.push_back("");
  return cells;
}

std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{seed, stream};
  return std::mt19937_64(seq);
}

}  // namespace

Eigen::MatrixXd GroupMoments::pooled_second_moment() const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim(), dim());
  for (int a = 0; a < num_groups(); ++a) M += p[a] * m2[a];
  return M;
}

Dataset load_csv(const std::string& path,
                 const std::variant<std::string, int>& attribute_column,
                 const std::vector<std::string>& feature_columns,
                 const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw validation_error("load_csv: cannot open file '" + path + "'");

  std::string line;
  if (!std::getline(in, line) || line.empty()) {
    throw validation_error("load_csv: file '" + path + "' is empty or has no header");
  }
  const std::vector<std::string> header = split_line(line, opts.delimiter);

  int attr_idx = -1;
  if (std::holds_alternative<int>(attribute_column)) {
    attr_idx = std::get<int>(attribute_column);
    if (attr_idx < 0 || attr_idx >= static_cast<int>(header.size())) {
      throw validation_error("load_csv: attribute column index " +
                             std::to_string(attr_idx) + " out of range");
    }
  } else {
    const std::string& name = std::get<std::string>(attribute_column);
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw validation_error("load_csv: attribute column '" + name + "' not found");
    }
    attr_idx = static_cast<int>(it - header.begin());
  }

  std::vector<int> feat_idx;
  if (feature_columns.empty()) {
    for (int j = 0; j < static_cast<int>(header.size()); ++j) {
      if (j != attr_idx) feat_idx.push_back(j);
    }
  } else {
    for (const auto& name : feature_columns) {
      auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) {
        throw validation_error("load_csv: feature column '" + name + "' not found");
      }
      feat_idx.push_back(static_cast<int>(it - header.begin()));
    }
  }
  if (feat_idx.empty()) throw validation_error("load_csv: no feature columns");

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::vector<std::string> group_names;
  std::unordered_map<std::string, int> label_map;

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line, opts.delimiter);
    if (cells.size() < header.size()) {
      throw validation_error("load_csv: row " + std::to_string(line_no) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(header.size()));
    }
    std::vector<double> row(feat_idx.size());
    for (std::size_t j = 0; j < feat_idx.size(); ++j) {
      const std::string& cell = cells[feat_idx[j]];
      std::size_t pos = 0;
      double v = 0;
      bool ok = !cell.empty();
      if (ok) {
        try {
          v = std::stod(cell, &pos);
        } catch (const std::exception&) {
          ok = false;
        }
      }
      if (!ok || pos != cell.size()) {
        throw validation_error("load_csv: non-numeric cell at row " +
                               std::to_string(line_no) + ", column '" +
                               header[feat_idx[j]] + "'");
      }
      row[j] = v;
    }
    const std::string& attr = cells[attr_idx];
    auto [it, inserted] = label_map.try_emplace(attr, static_cast<int>(group_names.size()));
    if (inserted) group_names.push_back(attr);
    labels.push_back(it->second);
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw validation_error("load_csv: file '" + path + "' has no data rows");
  if (group_names.size() < 2) {
    throw validation_error("load_csv: attribute column has a single value '" +
                           group_names[0] + "'; need at least two groups");
  }

  Eigen::MatrixXd X(rows.size(), feat_idx.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < feat_idx.size(); ++j) X(i, j) = rows[i][j];
  }

  // Drop near-constant and wildly scaled columns.
  std::vector<int> keep;
  Eigen::VectorXd mean = X.colwise().mean();
  for (int j = 0; j < X.cols(); ++j) {
    double var = (X.col(j).array() - mean[j]).square().mean();
    double sd = std::sqrt(var);
    if (sd < opts.min_std || sd > opts.max_std) {
      std::cerr << "load_csv: dropping column '" << header[feat_idx[j]]
                << "' (stddev " << sd << ")\n";
    } else {
      keep.push_back(j);
    }
  }
  if (keep.empty()) throw validation_error("load_csv: all feature columns dropped");

  Dataset ds;
  ds.X.resize(X.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    ds.X.col(static_cast<Eigen::Index>(j)) = X.col(keep[j]);
    ds.feature_names.push_back(header[feat_idx[keep[j]]]);
  }
  ds.A = Eigen::Map<Eigen::VectorXi>(labels.data(), static_cast<Eigen::Index>(labels.size()));
  ds.num_groups = static_cast<int>(group_names.size());
  ds.group_names = std::move(group_names);
  ds.center_vec = Eigen::VectorXd::Zero(ds.dim());
  return ds;
}

Dataset center(const Dataset& ds, std::optional<Eigen::VectorXd> center_vec) {
  Eigen::VectorXd c;
  if (center_vec) {
    if (center_vec->size() != ds.dim()) {
      throw validation_error("center: supplied center has dimension " +
                             std::to_string(center_vec->size()) + ", data has " +
                             std::to_string(ds.dim()));
    }
    c = *center_vec;
  } else {
    c = ds.X.colwise().mean();
  }
  Dataset out = ds;
  out.X = ds.X.rowwise() - c.transpose();
  out.centered = true;
  out.center_vec = c;
  return out;
}

GroupMoments group_moments(const Dataset& ds) {
  if (!ds.centered) throw validation_error("group_moments: dataset is not centered");
  const int m = ds.num_groups;
  const Eigen::Index d = ds.dim();
  const Eigen::Index n = ds.n();

  GroupMoments gm;
  gm.p = Eigen::VectorXd::Zero(m);
  gm.mu.assign(m, Eigen::VectorXd::Zero(d));
  gm.sigma.assign(m, Eigen::MatrixXd::Zero(d, d));
  gm.m2.assign(m, Eigen::MatrixXd::Zero(d, d));
  gm.counts.assign(m, 0);

  for (Eigen::Index i = 0; i < n; ++i) {
    const int a = ds.A[i];
    gm.counts[a]++;
    gm.mu[a] += ds.X.row(i).transpose();
    gm.m2[a].noalias() += ds.X.row(i).transpose() * ds.X.row(i);
  }
  for (int a = 0; a < m; ++a) {
    if (gm.counts[a] == 0) {
      throw validation_error("group_moments: group " + std::to_string(a) + " is empty");
    }
    const double na = static_cast<double>(gm.counts[a]);
    gm.p[a] = na / static_cast<double>(n);
    gm.mu[a] /= na;
    gm.m2[a] /= na;
    gm.m2[a] = 0.5 * (gm.m2[a] + gm.m2[a].transpose());
    gm.sigma[a] = gm.m2[a] - gm.mu[a] * gm.mu[a].transpose();
  }
  return gm;
}

Dataset take_rows(const Dataset& ds, const std::vector<Eigen::Index>& rows) {
  Dataset out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), ds.dim());
  out.A.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = ds.X.row(rows[i]);
    out.A[static_cast<Eigen::Index>(i)] = ds.A[rows[i]];
  }
  out.num_groups = ds.num_groups;
  out.centered = ds.centered;
  out.center_vec = ds.center_vec;
  out.feature_names = ds.feature_names;
  out.group_names = ds.group_names;
  return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double train_ratio,
                                             std::uint64_t seed) {
  if (train_ratio <= 0.0 || train_ratio >= 1.0) {
    throw validation_error("stratified_split: ratio must be in (0,1)");
  }
  std::vector<Eigen::Index> train_rows, test_rows;
  for (int a = 0; a < ds.num_groups; ++a) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
      if (ds.A[i] == a) idx.push_back(i);
    }
    auto rng = rng_for(seed, 0x5b1dull + static_cast<std::uint64_t>(a));
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_train = static_cast<std::size_t>(
        std::llround(train_ratio * static_cast<double>(idx.size())));
    if (idx.size() >= 2) {
      n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
    } else {
      n_train = idx.size();  // lone sample goes to train
    }
    train_rows.insert(train_rows.end(), idx.begin(), idx.begin() + n_train);
    test_rows.insert(test_rows.end(), idx.begin() + n_train, idx.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {take_rows(ds, train_rows), take_rows(ds, test_rows)};
}

std::vector<std::vector<Eigen::Index>> stratified_folds(const Dataset& ds, int folds,
                                                        std::uint64_t seed) {
  if (folds < 2) throw validation_error("stratified_folds: need at least 2 folds");
  std::vector<std::vector<Eigen::Index>> out(folds);
  for (int a = 0; a < ds.num_groups; ++a) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
      if (ds.A[i] == a) idx.push_back(i);
    }
    if (static_cast<int>(idx.size()) < folds) {
      throw validation_error("stratified_folds: group " + std::to_string(a) +
                             " has fewer samples than folds");
    }
    auto rng = rng_for(seed, 0xf01dull + static_cast<std::uint64_t>(a));
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      out[i % folds].push_back(idx[i]);
    }
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

}  // namespace rfpca
