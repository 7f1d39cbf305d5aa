#include <CLI11.hpp>
#include <iostream>

#include "rfpca/errors.hpp"
#include "rfpca/experiment.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitConditions = 3;
constexpr int kExitNumerical = 4;

void add_common_flags(CLI::App* cmd, rfpca::ExperimentConfig& cfg) {
  cmd->add_option("--input", cfg.input, "input CSV path")->required();
  cmd->add_option("--attr", cfg.attr, "sensitive attribute column name");
  cmd->add_option("--attr-index", cfg.attr_index,
                  "sensitive attribute column index (zero-based)");
  cmd->add_option("--k", cfg.k, "target dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--iters", cfg.iterations, "subgradient iterations per restart");
  cmd->add_option("--restarts", cfg.restarts, "random restarts");
  cmd->add_option("--seed", cfg.seed, "random seed");
  cmd->add_option("--split", cfg.split, "train fraction in (0,1); 0 = use all data");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_option("--retraction",
                  [&cfg](const std::vector<std::string>& vals) {
                    if (vals[0] == "qf") {
                      cfg.retraction = rfpca::Retraction::qf;
                    } else if (vals[0] == "polar") {
                      cfg.retraction = rfpca::Retraction::polar;
                    } else {
                      return false;
                    }
                    return true;
                  },
                  "retraction: qf|polar (default polar)");
  cmd->add_option("--test-center",
                  [&cfg](const std::vector<std::string>& vals) {
                    if (vals[0] == "train") {
                      cfg.test_center_train = true;
                    } else if (vals[0] == "test") {
                      cfg.test_center_train = false;
                    } else {
                      return false;
                    }
                    return true;
                  },
                  "center held-out data with: train|test mean (default train)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributionally robust fairness-aware PCA"};
  app.require_subcommand(1);

  rfpca::ExperimentConfig cfg;

  auto* fit = app.add_subcommand("fit", "fit one (lambda, alpha) configuration");
  add_common_flags(fit, cfg);
  fit->add_option("--lambda", cfg.lambda, "fairness penalty");
  fit->add_option("--alpha", cfg.alpha, "radius scale, eps_a = alpha/sqrt(N_a)");

  auto* pca = app.add_subcommand("pca", "nominal PCA baseline");
  add_common_flags(pca, cfg);

  auto* sweep = app.add_subcommand("sweep", "grid sweep with Pareto CSV + SVG");
  add_common_flags(sweep, cfg);
  sweep->add_option("--lambda", cfg.lambda_grid, "lambda grid");
  sweep->add_option("--alpha", cfg.alpha_grid, "alpha grid");

  auto* cv = app.add_subcommand("cv", "cross-validated hyperparameter selection");
  add_common_flags(cv, cfg);
  cv->add_option("--lambda", cfg.lambda_grid, "lambda grid");
  cv->add_option("--alpha", cfg.alpha_grid, "alpha grid");
  cv->add_option("--folds", cfg.folds, "cross-validation folds");

  auto* fairtest =
      app.add_subcommand("fairtest", "rank test for a perfectly fair projection");
  add_common_flags(fairtest, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) {
      rfpca::run_fit(cfg);
    } else if (pca->parsed()) {
      rfpca::run_pca(cfg);
    } else if (sweep->parsed()) {
      rfpca::run_sweep(cfg);
    } else if (cv->parsed()) {
      const auto sel = rfpca::run_cv(cfg);
      std::cout << "selected lambda=" << sel.lambda << " alpha=" << sel.alpha
                << " mean fold score=" << sel.mean_score << "\n";
    } else if (fairtest->parsed()) {
      rfpca::run_fairtest(cfg);
    }
  } catch (const rfpca::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rfpca::condition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConditions;
  } catch (const rfpca::numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
