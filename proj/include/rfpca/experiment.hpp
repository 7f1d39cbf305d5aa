#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rfpca/ambiguity.hpp"
#include "rfpca/dataset.hpp"
#include "rfpca/metrics.hpp"
#include "rfpca/solver.hpp"

namespace rfpca {

/// Shared configuration for the command-level drivers.
struct ExperimentConfig {
  std::string input;
  std::string attr;     // attribute column name; ignored when attr_index >= 0
  int attr_index = -1;  // zero-based column index
  int k = 3;
  double lambda = 0.0;
  double alpha = 0.0;  // eps_a = alpha / sqrt(N_a)
  std::vector<double> lambda_grid{0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
  std::vector<double> alpha_grid{0.05, 0.1, 0.15};
  int iterations = 200;
  int restarts = 5;
  Retraction retraction = Retraction::polar;
  std::uint64_t seed = 0;
  double split = 0.3;  // train fraction; 0 disables the split
  int folds = 3;
  std::string out_dir = ".";
  bool test_center_train = true;  // center test data with the training mean
};

/// One fitted projection plus the solver diagnostics behind it.
struct FitOutcome {
  Projection V;
  StiefelPoint U;
  double objective = 0.0;
  double seconds = 0.0;
  double min_grad_norm = 0.0;
};

/// Dispatches on the number of groups: binary closed form for m = 2, the
/// pairwise-max objective otherwise.
FitOutcome fit_moments(const GroupMoments& gm, const RobustConfig& cfg,
                       const SolverOptions& opts);

struct SweepRow {
  double lambda = 0.0;
  double alpha = 0.0;
  double are = 0.0;
  double abdiff = 0.0;
  double objective = 0.0;
  double seconds = 0.0;
  std::string status;  // "ok" or "invalid"
};

struct CvSelection {
  double lambda = 0.0;
  double alpha = 0.0;
  double mean_score = 0.0;  // mean fold (ARE + ABDiff)
};

Dataset load_input(const ExperimentConfig& cfg);

std::string model_to_json(const FitOutcome& fit, const Dataset& train,
                          const ExperimentConfig& cfg, double lambda, double alpha);

/// fit: one (lambda, alpha) pair; writes model.json, report_train.json and,
/// when a split is configured, report_test.json under cfg.out_dir.
void run_fit(const ExperimentConfig& cfg);

/// pca: nominal baseline (lambda = 0, eps = 0, eigensolver route).
void run_pca(const ExperimentConfig& cfg);

/// sweep: grid over (lambda, alpha); writes sweep.csv and sweep.svg.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

/// cv: k-fold selection of (lambda, alpha) by mean fold (ARE + ABDiff),
/// refit on the full training split; writes cv.json plus the fit outputs.
CvSelection run_cv(const ExperimentConfig& cfg);

/// fairtest: rank test for existence of a perfectly fair projection.
void run_fairtest(const ExperimentConfig& cfg);

}  // namespace rfpca
