#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rfpca/ambiguity.hpp"
#include "rfpca/dataset.hpp"
#include "rfpca/errors.hpp"
#include "rfpca/experiment.hpp"
#include "rfpca/metrics.hpp"
#include "rfpca/multigroup.hpp"
#include "rfpca/objective.hpp"
#include "rfpca/solver.hpp"
#include "rfpca/stiefel.hpp"

namespace py = pybind11;
using namespace rfpca;

namespace {

Dataset make_dataset(const Eigen::MatrixXd& X, const Eigen::VectorXi& A) {
  if (X.rows() != A.size()) {
    throw validation_error("dataset: X and A row counts differ");
  }
  Dataset ds;
  ds.X = X;
  ds.A = A;
  ds.num_groups = A.size() ? A.maxCoeff() + 1 : 0;
  for (Eigen::Index i = 0; i < A.size(); ++i) {
    if (A[i] < 0 || A[i] >= ds.num_groups) {
      throw validation_error("dataset: labels must be 0..m-1");
    }
  }
  ds.center_vec = Eigen::VectorXd::Zero(X.cols());
  return ds;
}

RobustConfig make_config(double lambda, const Eigen::VectorXd& epsilon, int k) {
  RobustConfig rc;
  rc.lambda = lambda;
  rc.epsilon = epsilon;
  rc.k = k;
  return rc;
}

}  // namespace

PYBIND11_MODULE(_rfpca, m) {
  m.doc() = "Distributionally robust fairness-aware PCA";

  py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<condition_error>(m, "ConditionError", PyExc_RuntimeError);
  py::register_exception<numerical_error>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("X"), py::arg("A"))
      .def_readonly("X", &Dataset::X)
      .def_readonly("A", &Dataset::A)
      .def_readonly("num_groups", &Dataset::num_groups)
      .def_readonly("centered", &Dataset::centered)
      .def_readonly("center", &Dataset::center_vec);

  py::class_<GroupMoments>(m, "GroupMoments")
      .def_readonly("p", &GroupMoments::p)
      .def_readonly("mu", &GroupMoments::mu)
      .def_readonly("sigma", &GroupMoments::sigma)
      .def_readonly("m2", &GroupMoments::m2)
      .def_readonly("counts", &GroupMoments::counts)
      .def("pooled_second_moment", &GroupMoments::pooled_second_moment);

  py::class_<RobustConfig>(m, "RobustConfig")
      .def(py::init(&make_config), py::arg("lam"), py::arg("epsilon"), py::arg("k"))
      .def_readwrite("lam", &RobustConfig::lambda)
      .def_readwrite("epsilon", &RobustConfig::epsilon)
      .def_readwrite("k", &RobustConfig::k);

  py::class_<ConditionReport::PerGroup>(m, "GroupCondition")
      .def_readonly("prob_bound", &ConditionReport::PerGroup::prob_bound)
      .def_readonly("eig_bound", &ConditionReport::PerGroup::eig_bound)
      .def_readonly("eig_sum", &ConditionReport::PerGroup::eig_sum);

  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("groups", &ConditionReport::groups)
      .def_readonly("valid", &ConditionReport::valid);

  py::class_<ReformParams>(m, "ReformParams")
      .def_readonly("kappa", &ReformParams::kappa)
      .def_readonly("theta", &ReformParams::theta)
      .def_readonly("vartheta", &ReformParams::vartheta)
      .def_readonly("C", &ReformParams::C)
      .def_readonly("m2", &ReformParams::m2)
      .def_readonly("conditions", &ReformParams::conditions);

  py::class_<StiefelPoint>(m, "StiefelPoint")
      .def(py::init<Eigen::MatrixXd>())
      .def_property_readonly("matrix", &StiefelPoint::matrix);

  py::class_<ObjectiveEval>(m, "ObjectiveEval")
      .def_readonly("value", &ObjectiveEval::value)
      .def_readonly("active_branch", &ObjectiveEval::active_branch)
      .def_readonly("branch_values", &ObjectiveEval::branch_values);

  py::enum_<Retraction>(m, "Retraction")
      .value("qf", Retraction::qf)
      .value("polar", Retraction::polar);

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("iterations", &SolverOptions::iterations)
      .def_readwrite("restarts", &SolverOptions::restarts)
      .def_readwrite("retraction", &SolverOptions::retraction)
      .def_readwrite("seed", &SolverOptions::seed)
      .def_readwrite("step_override", &SolverOptions::step_override);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("best_point", &SolveReport::best_point)
      .def_readonly("best_value", &SolveReport::best_value)
      .def_readonly("best_restart", &SolveReport::best_restart)
      .def_readonly("seconds", &SolveReport::seconds);

  py::class_<Projection>(m, "Projection")
      .def_readonly("V", &Projection::V);

  py::class_<FairnessReport>(m, "FairnessReport")
      .def_readonly("are", &FairnessReport::are)
      .def_readonly("group_errors", &FairnessReport::group_errors)
      .def_readonly("abdiff", &FairnessReport::abdiff)
      .def_readonly("unfairness", &FairnessReport::unfairness);

  m.def("load_csv",
        [](const std::string& path, const std::string& attr) {
          return load_csv(path, attr);
        },
        py::arg("path"), py::arg("attribute_column"));
  m.def("center",
        [](const Dataset& ds, std::optional<Eigen::VectorXd> c) {
          return center(ds, std::move(c));
        },
        py::arg("dataset"), py::arg("center") = std::nullopt);
  m.def("group_moments", &group_moments);
  m.def("w_divergence", &w_divergence);
  m.def("worst_case_expectation", &worst_case_expectation, py::arg("upsilon"),
        py::arg("eps"), py::arg("M"), py::arg("P"));
  m.def("check_conditions", &check_conditions);
  m.def("reform_params", &reform_params);
  m.def("radii_from_alpha", &radii_from_alpha);
  m.def("eval_F", &eval_F);
  m.def("riemannian_subgradient", &riemannian_subgradient);
  m.def("lipschitz_constant", &lipschitz_constant);
  m.def("random_point", &random_point);
  m.def("project_tangent", &project_tangent);
  m.def("retract_qf", &retract_qf);
  m.def("retract_polar", &retract_polar);
  m.def("solve",
        [](const ReformParams& rp, const SolverOptions& opts) { return solve(rp, opts); });
  m.def("convergence_proxy", &convergence_proxy);
  m.def("nominal_pca", &nominal_pca);
  m.def("complement_projection", &complement_projection);
  m.def("reconstruction_loss", &reconstruction_loss);
  m.def("evaluate", &evaluate);
  m.def("evaluate_projection",
        [](const Eigen::MatrixXd& V, const Dataset& ds) {
          Projection proj;
          proj.V = V;
          return evaluate(proj, ds);
        },
        py::arg("V"), py::arg("dataset"));
  m.def("fair_projection_test",
        [](const Eigen::MatrixXd& S, int k) {
          const auto res = fair_projection_test(S, k);
          return py::make_tuple(res.exists,
                                res.V ? py::cast(res.V->V) : py::object(py::none()));
        },
        py::arg("S"), py::arg("k"));
  m.def("fit",
        [](const Dataset& ds, double lam, double alpha, int k, const SolverOptions& opts) {
          const Dataset centered = ds.centered ? ds : center(ds);
          const GroupMoments gm = group_moments(centered);
          RobustConfig rc;
          rc.lambda = lam;
          rc.epsilon = radii_from_alpha(alpha, gm);
          rc.k = k;
          const FitOutcome out = fit_moments(gm, rc, opts);
          return py::make_tuple(out.V.V, out.objective);
        },
        py::arg("dataset"), py::arg("lam"), py::arg("alpha"), py::arg("k"),
        py::arg("options") = SolverOptions{});
}
