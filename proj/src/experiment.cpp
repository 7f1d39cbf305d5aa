#include "rfpca/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "rfpca/errors.hpp"
#include "rfpca/svg.hpp"

namespace rfpca {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write '" + path.string() + "'");
  out << content;
}

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& M) {
  std::vector<std::vector<double>> rows(M.rows());
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    rows[i].assign(M.row(i).begin(), M.row(i).end());
  }
  return rows;
}

SolverOptions solver_options(const ExperimentConfig& cfg) {
  SolverOptions opts;
  opts.iterations = cfg.iterations;
  opts.restarts = cfg.restarts;
  opts.retraction = cfg.retraction;
  opts.seed = cfg.seed;
  return opts;
}

struct SplitData {
  Dataset train;                 // centered
  std::optional<Dataset> test;   // centered per cfg.test_center_train
  GroupMoments gm;
};

SplitData prepare(const Dataset& raw, const ExperimentConfig& cfg) {
  SplitData out;
  if (cfg.split > 0.0 && cfg.split < 1.0) {
    auto [tr, te] = stratified_split(raw, cfg.split, cfg.seed);
    out.train = center(tr);
    out.test = cfg.test_center_train ? center(te, out.train.center_vec) : center(te);
  } else {
    out.train = center(raw);
  }
  out.gm = group_moments(out.train);
  return out;
}

}  // namespace

FitOutcome fit_moments(const GroupMoments& gm, const RobustConfig& cfg,
                       const SolverOptions& opts) {
  SolveReport report;
  if (gm.num_groups() == 2) {
    report = solve(reform_params(gm, cfg), opts);
  } else {
    report = solve(pair_params(gm, cfg), opts);
  }
  FitOutcome out;
  out.U = report.best_point;
  out.V = complement_projection(report.best_point);
  out.objective = report.best_value;
  out.seconds = report.seconds;
  out.min_grad_norm = convergence_proxy(report);
  return out;
}

Dataset load_input(const ExperimentConfig& cfg) {
  std::variant<std::string, int> attr;
  if (cfg.attr_index >= 0) {
    attr = cfg.attr_index;
  } else if (!cfg.attr.empty()) {
    attr = cfg.attr;
  } else {
    throw validation_error("no attribute column given (use --attr or --attr-index)");
  }
  return load_csv(cfg.input, attr);
}

std::string model_to_json(const FitOutcome& fit, const Dataset& train,
                          const ExperimentConfig& cfg, double lambda, double alpha) {
  nlohmann::json j;
  j["version"] = 1;
  j["provenance"] =
      fit.V.tag == Provenance::nominal_pca ? "nominal-pca" : "robust-fair";
  j["k"] = cfg.k;
  j["lambda"] = lambda;
  j["alpha"] = alpha;
  j["iterations"] = cfg.iterations;
  j["restarts"] = cfg.restarts;
  j["retraction"] = cfg.retraction == Retraction::polar ? "polar" : "qf";
  j["seed"] = cfg.seed;
  j["objective"] = fit.objective;
  j["center"] = std::vector<double>(train.center_vec.begin(), train.center_vec.end());
  j["feature_names"] = train.feature_names;
  j["group_names"] = train.group_names;
  j["V"] = to_rows(fit.V.V);
  if (fit.U.rows() > 0) j["U"] = to_rows(fit.U.matrix());
  return j.dump(2);
}

void run_fit(const ExperimentConfig& cfg) {
  const Dataset raw = load_input(cfg);
  const SplitData data = prepare(raw, cfg);

  RobustConfig rc;
  rc.lambda = cfg.lambda;
  rc.epsilon = radii_from_alpha(cfg.alpha, data.gm);
  rc.k = cfg.k;
  const FitOutcome fit = fit_moments(data.gm, rc, solver_options(cfg));

  const fs::path out(cfg.out_dir);
  write_file(out / "model.json", model_to_json(fit, data.train, cfg, cfg.lambda, cfg.alpha));
  write_file(out / "report_train.json", report_to_json(evaluate(fit.V, data.train)));
  if (data.test) {
    write_file(out / "report_test.json", report_to_json(evaluate(fit.V, *data.test)));
  }
}

void run_pca(const ExperimentConfig& cfg) {
  const Dataset raw = load_input(cfg);
  const SplitData data = prepare(raw, cfg);

  FitOutcome fit;
  fit.V = nominal_pca(data.gm.pooled_second_moment(), cfg.k);
  // Objective of the nominal problem: sum of the d-k smallest eigenvalues.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(data.gm.pooled_second_moment(),
                                                    Eigen::EigenvaluesOnly);
  fit.objective = es.eigenvalues().head(data.gm.dim() - cfg.k).sum();
  const fs::path out(cfg.out_dir);
  write_file(out / "model.json", model_to_json(fit, data.train, cfg, 0.0, 0.0));
  write_file(out / "report_train.json", report_to_json(evaluate(fit.V, data.train)));
  if (data.test) {
    write_file(out / "report_test.json", report_to_json(evaluate(fit.V, *data.test)));
  }
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  if (cfg.lambda_grid.empty() || cfg.alpha_grid.empty()) {
    throw validation_error("run_sweep: grids must be nonempty");
  }
  const Dataset raw = load_input(cfg);
  const SplitData data = prepare(raw, cfg);
  const Dataset& eval_split = data.test ? *data.test : data.train;

  std::vector<SweepRow> rows;
  for (double lambda : cfg.lambda_grid) {
    for (double alpha : cfg.alpha_grid) {
      SweepRow row;
      row.lambda = lambda;
      row.alpha = alpha;
      RobustConfig rc;
      rc.lambda = lambda;
      rc.epsilon = radii_from_alpha(alpha, data.gm);
      rc.k = cfg.k;
      try {
        const FitOutcome fit = fit_moments(data.gm, rc, solver_options(cfg));
        const FairnessReport rep = evaluate(fit.V, eval_split);
        row.are = rep.are;
        row.abdiff = rep.abdiff;
        row.objective = fit.objective;
        row.seconds = fit.seconds;
        row.status = "ok";
      } catch (const condition_error&) {
        row.status = "invalid";
      }
      rows.push_back(row);
    }
  }

  std::ostringstream csv;
  csv << "lambda,alpha,are,abdiff,objective,seconds,status\n";
  csv.precision(12);
  std::vector<ScatterPoint> points;
  for (const auto& r : rows) {
    csv << r.lambda << ',' << r.alpha << ',' << r.are << ',' << r.abdiff << ','
        << r.objective << ',' << r.seconds << ',' << r.status << '\n';
    if (r.status == "ok") {
      std::ostringstream label;
      label << "l=" << r.lambda << " a=" << r.alpha;
      points.push_back({r.are, r.abdiff, label.str()});
    }
  }
  const fs::path out(cfg.out_dir);
  write_file(out / "sweep.csv", csv.str());
  write_scatter_svg((out / "sweep.svg").string(), points, "ARE", "ABDiff",
                    "Error / fairness trade-off");
  return rows;
}

CvSelection run_cv(const ExperimentConfig& cfg) {
  if (cfg.lambda_grid.empty() || cfg.alpha_grid.empty()) {
    throw validation_error("run_cv: grids must be nonempty");
  }
  if (cfg.folds < 2) throw validation_error("run_cv: need at least 2 folds");

  const Dataset raw = load_input(cfg);
  const SplitData data = prepare(raw, cfg);

  // Folds are cut from the (uncentered geometry of the) training split; each
  // sub-train is re-centered and its mean applied to the held-out fold.
  const auto folds = stratified_folds(data.train, cfg.folds, cfg.seed);

  CvSelection best;
  bool have_best = false;
  nlohmann::json grid_log = nlohmann::json::array();

  for (double lambda : cfg.lambda_grid) {
    for (double alpha : cfg.alpha_grid) {
      double score_sum = 0.0;
      int ok_folds = 0;
      bool invalid = false;
      for (int f = 0; f < cfg.folds && !invalid; ++f) {
        std::vector<Eigen::Index> train_rows;
        for (int g = 0; g < cfg.folds; ++g) {
          if (g == f) continue;
          train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
        }
        Dataset sub_train = center(take_rows(data.train, train_rows));
        Dataset holdout =
            cfg.test_center_train
                ? center(take_rows(data.train, folds[f]), sub_train.center_vec)
                : center(take_rows(data.train, folds[f]));
        GroupMoments gm;
        try {
          gm = group_moments(sub_train);
        } catch (const validation_error&) {
          invalid = true;  // a fold emptied a group
          break;
        }
        RobustConfig rc;
        rc.lambda = lambda;
        rc.epsilon = radii_from_alpha(alpha, gm);
        rc.k = cfg.k;
        try {
          const FitOutcome fit = fit_moments(gm, rc, solver_options(cfg));
          const FairnessReport rep = evaluate(fit.V, holdout);
          score_sum += rep.are + rep.abdiff;
          ++ok_folds;
        } catch (const condition_error&) {
          invalid = true;
        }
      }
      nlohmann::json entry;
      entry["lambda"] = lambda;
      entry["alpha"] = alpha;
      if (invalid || ok_folds == 0) {
        entry["status"] = "invalid";
      } else {
        const double mean_score = score_sum / ok_folds;
        entry["status"] = "ok";
        entry["mean_score"] = mean_score;
        if (!have_best || mean_score < best.mean_score) {
          best = {lambda, alpha, mean_score};
          have_best = true;
        }
      }
      grid_log.push_back(entry);
    }
  }
  if (!have_best) {
    throw condition_error("run_cv: every grid point failed the validity conditions");
  }

  // Refit on the full training split with the selected hyperparameters.
  RobustConfig rc;
  rc.lambda = best.lambda;
  rc.epsilon = radii_from_alpha(best.alpha, data.gm);
  rc.k = cfg.k;
  const FitOutcome fit = fit_moments(data.gm, rc, solver_options(cfg));

  nlohmann::json j;
  j["grid"] = grid_log;
  j["selected"] = {{"lambda", best.lambda},
                   {"alpha", best.alpha},
                   {"mean_score", best.mean_score}};
  j["report_train"] = nlohmann::json::parse(report_to_json(evaluate(fit.V, data.train)));
  if (data.test) {
    j["report_test"] = nlohmann::json::parse(report_to_json(evaluate(fit.V, *data.test)));
  }
  const fs::path out(cfg.out_dir);
  write_file(out / "cv.json", j.dump(2));
  write_file(out / "model.json",
             model_to_json(fit, data.train, cfg, best.lambda, best.alpha));
  return best;
}

void run_fairtest(const ExperimentConfig& cfg) {
  const Dataset raw = load_input(cfg);
  const Dataset centered = center(raw);
  const GroupMoments gm = group_moments(centered);

  nlohmann::json j;
  nlohmann::json pairs = nlohmann::json::array();
  bool all_exist = true;
  for (int a = 0; a < gm.num_groups(); ++a) {
    for (int b = a + 1; b < gm.num_groups(); ++b) {
      const Eigen::MatrixXd S = gm.m2[a] - gm.m2[b];
      const auto res = fair_projection_test(S, cfg.k);
      nlohmann::json entry;
      entry["groups"] = {a, b};
      entry["exists"] = res.exists;
      pairs.push_back(entry);
      all_exist = all_exist && res.exists;
    }
  }
  j["k"] = cfg.k;
  j["pairs"] = pairs;
  j["exists_all_pairs"] = all_exist;
  if (gm.num_groups() == 2) {
    const auto res = fair_projection_test(gm.m2[0] - gm.m2[1], cfg.k);
    if (res.exists) j["V"] = to_rows(res.V->V);
  }
  write_file(fs::path(cfg.out_dir) / "fairtest.json", j.dump(2));
  std::cout << j.dump(2) << std::endl;
}

}  // namespace rfpca
