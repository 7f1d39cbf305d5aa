import numpy as np
import pytest

import rfpca


def toy_dataset(n0=120, n1=60, seed=0):
    rng = np.random.default_rng(seed)
    cov0 = np.diag([4.0, 0.2])
    cov1 = np.array([[0.2, 0.4], [0.4, 3.0]])
    x0 = rng.multivariate_normal([0, 0], cov0, size=n0)
    x1 = rng.multivariate_normal([0, 0], cov1, size=n1)
    X = np.vstack([x0, x1])
    A = np.concatenate([np.zeros(n0, dtype=np.int32), np.ones(n1, dtype=np.int32)])
    return rfpca.Dataset(X, A)


def test_dataset_and_moments():
    ds = toy_dataset()
    assert ds.num_groups == 2
    centered = rfpca.center(ds)
    assert centered.centered
    gm = rfpca.group_moments(centered)
    assert gm.p[0] == pytest.approx(2 / 3)
    pooled = gm.pooled_second_moment()
    assert pooled.shape == (2, 2)
    assert np.allclose(pooled, pooled.T)


def test_w_divergence_identity():
    mu = np.zeros(2)
    sigma = np.eye(2)
    assert rfpca.w_divergence(mu, sigma, mu, sigma) == pytest.approx(0.0)
    assert rfpca.w_divergence(mu + 1.0, sigma, mu, sigma) == pytest.approx(2.0)


def test_worst_case_expectation_collapse():
    M = np.diag([2.0, 1.0])
    P = np.diag([1.0, 0.0])
    assert rfpca.worst_case_expectation(0.5, 0.0, M, P) == pytest.approx(1.0)


def test_solve_smooth_case():
    ds = rfpca.center(toy_dataset())
    gm = rfpca.group_moments(ds)
    rp = rfpca.reform_params(gm, rfpca.RobustConfig(lam=0.0, epsilon=np.zeros(2), k=1))
    opts = rfpca.SolverOptions()
    opts.iterations = 800
    opts.restarts = 2
    opts.seed = 1
    report = rfpca.solve(rp, opts)
    pooled = gm.pooled_second_moment()
    smallest = np.linalg.eigvalsh(pooled)[0]
    assert report.best_value == pytest.approx(smallest, abs=1e-3)
    assert rfpca.convergence_proxy(report) < 1e-2


def test_fit_and_evaluate():
    ds = toy_dataset(seed=3)
    V, objective = rfpca.fit(ds, lam=0.5, alpha=0.05, k=1)
    assert V.shape == (2, 1)
    assert np.isfinite(objective)
    rep = rfpca.evaluate_projection(V, rfpca.center(ds))
    assert rep.are >= 0.0
    assert len(rep.group_errors) == 2
    assert rep.abdiff == pytest.approx(abs(rep.group_errors[0] - rep.group_errors[1]))


def test_nominal_pca_and_loss():
    M = np.diag([5.0, 2.0, 1.0])
    proj = rfpca.nominal_pca(M, 2)
    V = proj.V
    assert V.shape == (3, 2)
    assert np.allclose(V.T @ V, np.eye(2), atol=1e-12)
    x = np.array([0.0, 0.0, 2.0])
    loss = rfpca.reconstruction_loss(proj, x)
    assert loss == pytest.approx(4.0)


def test_fair_projection_test():
    g = np.array([1.0, -1.0, 0.5])
    S = np.outer(g, g)
    exists, V = rfpca.fair_projection_test(S, 2)
    assert exists
    P = np.eye(3) - V @ V.T
    assert abs(np.trace(P @ S)) < 1e-9
    exists_full, V_none = rfpca.fair_projection_test(np.diag([1.0, -2.0, 0.5]), 2)
    assert not exists_full
    assert V_none is None


def test_exceptions_map_to_python():
    with pytest.raises(ValueError):
        rfpca.load_csv("/nonexistent/rfpca.csv", "g")
    ds = rfpca.center(toy_dataset())
    gm = rfpca.group_moments(ds)
    bad = rfpca.reform_params(
        gm, rfpca.RobustConfig(lam=0.9, epsilon=50 * np.ones(2), k=1)
    )
    assert not bad.conditions.valid
    with pytest.raises(RuntimeError):
        rfpca.solve(bad, rfpca.SolverOptions())
