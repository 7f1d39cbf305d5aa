#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "rfpca/errors.hpp"
#include "rfpca/metrics.hpp"
#include "test_util.hpp"

using namespace rfpca;
using namespace rfpca::testutil;

TEST_CASE("reconstruction_loss") {
  Projection V;
  V.V.resize(2, 1);
  V.V << 1, 0;

  SUBCASE("axis-aligned hand values") {
    Eigen::VectorXd x(2);
    x << 3, 4;
    CHECK(reconstruction_loss(V, x) == doctest::Approx(16.0));
    x << 5, 0;
    CHECK(reconstruction_loss(V, x) == doctest::Approx(0.0));
  }

  SUBCASE("agrees with the residual-norm definition") {
    std::mt19937_64 rng(2);
    Eigen::MatrixXd B = random_matrix(5, 2, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
    Projection W;
    W.V = qr.householderQ() * Eigen::MatrixXd::Identity(5, 2);
    for (int t = 0; t < 20; ++t) {
      Eigen::VectorXd x = random_vec(5, rng);
      Eigen::VectorXd resid = x - W.V * (W.V.transpose() * x);
      CHECK(reconstruction_loss(W, x) ==
            doctest::Approx(resid.squaredNorm()).epsilon(1e-10));
    }
  }

  SUBCASE("never negative despite rounding") {
    std::mt19937_64 rng(4);
    Eigen::MatrixXd B = random_matrix(3, 3, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
    Projection W;
    W.V = qr.householderQ() * Eigen::MatrixXd::Identity(3, 3);  // full basis
    for (int t = 0; t < 50; ++t) {
      CHECK(reconstruction_loss(W, random_vec(3, rng)) >= 0.0);
    }
  }

  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(reconstruction_loss(V, Eigen::VectorXd::Zero(3)),
                    validation_error);
  }
}

TEST_CASE("nominal_pca") {
  SUBCASE("diagonal hand case") {
    Eigen::MatrixXd M = Eigen::Vector3d(1.0, 5.0, 3.0).asDiagonal();
    Projection V = nominal_pca(M, 2);
    CHECK(V.tag == Provenance::nominal_pca);
    // Columns in descending eigenvalue order with positive leading entries.
    CHECK(V.V(1, 0) == doctest::Approx(1.0));
    CHECK(V.V(2, 1) == doctest::Approx(1.0));
    CHECK((V.V.transpose() * V.V - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
  }

  SUBCASE("captures maximal variance on random moments") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 10; ++t) {
      Eigen::MatrixXd M = random_psd(4, rng);
      Projection V = nominal_pca(M, 2);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
      const double captured = (V.V.transpose() * M * V.V).trace();
      CHECK(captured ==
            doctest::Approx(es.eigenvalues().tail(2).sum()).epsilon(1e-10));
    }
  }

  SUBCASE("invalid k") {
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(nominal_pca(M, 0), validation_error);
    CHECK_THROWS_AS(nominal_pca(M, 3), validation_error);
  }
}

TEST_CASE("complement_projection") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    auto U = random_point(5, 3, 50 + t);
    Projection V = complement_projection(U);
    CHECK(V.tag == Provenance::robust_fair);
    CHECK(V.V.cols() == 2);
    CHECK((V.V.transpose() * V.V - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-10);
    CHECK((U.matrix().transpose() * V.V).norm() < 1e-10);
    // [U V] is a full orthonormal basis: UU^T + VV^T = I.
    Eigen::MatrixXd sum = U.matrix() * U.matrix().transpose() + V.V * V.V.transpose();
    CHECK((sum - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-10);
  }
}

TEST_CASE("evaluate") {
  Dataset ds;
  ds.X.resize(4, 2);
  ds.X << 1, 0, 0, 2, 3, 0, 0, 4;
  ds.A.resize(4);
  ds.A << 0, 0, 1, 1;
  ds.num_groups = 2;
  Projection V;
  V.V.resize(2, 1);
  V.V << 1, 0;

  SUBCASE("hand-computed report") {
    // losses: 0, 4, 0, 16
    FairnessReport rep = evaluate(V, ds);
    CHECK(rep.are == doctest::Approx(5.0));
    CHECK(rep.group_errors[0] == doctest::Approx(2.0));
    CHECK(rep.group_errors[1] == doctest::Approx(8.0));
    CHECK(rep.abdiff == doctest::Approx(6.0));
    CHECK(rep.unfairness == doctest::Approx(6.0));
  }

  SUBCASE("multi-group abdiff is the max pairwise gap") {
    Dataset ds3;
    ds3.X.resize(3, 2);
    ds3.X << 0, 1, 0, 2, 0, 3;
    ds3.A.resize(3);
    ds3.A << 0, 1, 2;
    ds3.num_groups = 3;
    FairnessReport rep = evaluate(V, ds3);  // losses 1, 4, 9
    CHECK(rep.abdiff == doctest::Approx(8.0));
    CHECK(rep.are == doctest::Approx(14.0 / 3));
  }

  SUBCASE("empty group rejected") {
    Dataset bad = ds;
    bad.num_groups = 3;
    CHECK_THROWS_AS(evaluate(V, bad), validation_error);
  }
}

TEST_CASE("fair_projection_test") {
  SUBCASE("rank-1 gap admits a fair 2-subspace in R^3") {
    Eigen::Vector3d g(1.0, 2.0, -1.0);
    Eigen::MatrixXd S = g * g.transpose();
    auto res = fair_projection_test(S, 2);
    REQUIRE(res.exists);
    REQUIRE(res.V.has_value());
    const Eigen::MatrixXd& V = res.V->V;
    // The complement projector must annihilate the gap: <I - VV^T, S> = 0.
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(3, 3) - V * V.transpose();
    CHECK(std::abs((P * S).trace()) < 1e-9);
    CHECK((V.transpose() * V - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-10);
  }

  SUBCASE("full-rank gap admits none") {
    Eigen::MatrixXd S = Eigen::Vector3d(1.0, -2.0, 0.5).asDiagonal();
    auto res = fair_projection_test(S, 2);
    CHECK_FALSE(res.exists);
    CHECK_FALSE(res.V.has_value());
  }

  SUBCASE("zero gap is fair at any k") {
    auto res = fair_projection_test(Eigen::MatrixXd::Zero(3, 3), 1);
    CHECK(res.exists);
  }

  SUBCASE("randomized construction with known rank") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 10; ++t) {
      Eigen::MatrixXd B = random_matrix(5, 2, rng);
      Eigen::MatrixXd S =
          B.col(0) * B.col(0).transpose() - B.col(1) * B.col(1).transpose();
      auto yes = fair_projection_test(S, 2);  // rank <= 2
      REQUIRE(yes.exists);
      Eigen::MatrixXd P =
          Eigen::MatrixXd::Identity(5, 5) - yes.V->V * yes.V->V.transpose();
      CHECK(std::abs((P * S).trace()) < 1e-8 * S.norm());
      auto no = fair_projection_test(
          S + 0.5 * random_psd(5, rng) + Eigen::MatrixXd::Identity(5, 5), 2);
      CHECK_FALSE(no.exists);
    }
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(fair_projection_test(Eigen::MatrixXd::Zero(3, 2), 1),
                    validation_error);
    Eigen::MatrixXd asym(2, 2);
    asym << 0, 1, 0, 0;
    CHECK_THROWS_AS(fair_projection_test(asym, 1), validation_error);
  }
}

TEST_CASE("report_to_json round trip") {
  FairnessReport rep;
  rep.are = 1.5;
  rep.group_errors = {1.0, 2.0};
  rep.abdiff = 1.0;
  rep.unfairness = 1.0;
  auto j = nlohmann::json::parse(report_to_json(rep));
  CHECK(j["are"] == 1.5);
  CHECK(j["group_errors"].size() == 2);
  CHECK(j["group_errors"][1] == 2.0);
  CHECK(j["abdiff"] == 1.0);
  CHECK(j["unfairness"] == 1.0);
}
