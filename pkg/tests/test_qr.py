"""Exact quantile regression core: exchange solver vs vertex enumeration."""

from itertools import combinations

import numpy as np
import pytest

from quantour import (
    DegenerateDesign,
    DegenerateTau,
    DimensionMismatch,
    QrProblem,
    TauOutOfRange,
    check_loss,
    dual_weights,
    solve_qr,
    validate_tau,
)

RNG = np.random.default_rng


def oracle_objective(y, X, tau):
    """Independent optimum: try every p-row vertex, keep the best loss.

    Deliberately avoids package helpers so it cannot share a bug with
    the solver under test.
    """
    n, p = X.shape
    best = np.inf
    for rows in combinations(range(n), p):
        sub = X[list(rows)]
        if abs(np.linalg.det(sub)) < 1e-10:
            continue
        beta = np.linalg.solve(sub, y[list(rows)])
        r = y - X @ beta
        obj = float(np.sum(r * (tau - (r < 0.0))))
        best = min(best, obj)
    return best


def random_instance(rng, n_max=12, p_max=3):
    n = int(rng.integers(4, n_max + 1))
    p = int(rng.integers(1, min(p_max, n - 1) + 1))
    X = np.column_stack([np.ones(n)] + [rng.standard_normal(n) for _ in range(p - 1)])
    y = rng.standard_normal(n) * rng.uniform(0.5, 3.0)
    # keep n * tau off the integer lattice
    tau = float(rng.uniform(0.05, 0.95))
    if abs(n * tau - round(n * tau)) < 1e-3:
        tau += 1.7e-3
    return y, X, tau


def test_validate_tau_bounds():
    with pytest.raises(TauOutOfRange):
        validate_tau(0.0)
    with pytest.raises(TauOutOfRange):
        validate_tau(1.0)
    with pytest.raises(TauOutOfRange):
        validate_tau(-0.2)
    assert validate_tau(0.25) == 0.25


def test_validate_tau_integer_lattice():
    with pytest.raises(DegenerateTau) as err:
        validate_tau(0.25, n=8)
    assert err.value.nearest == ((2 - 0.5) / 8, (2 + 0.5) / 8)
    # off-lattice passes with the same n
    assert validate_tau(0.26, n=8) == 0.26


def test_check_loss_values():
    r = np.array([-2.0, 0.0, 3.0])
    got = check_loss(0.3, r)
    assert np.allclose(got, [2.0 * 0.7, 0.0, 3.0 * 0.3])
    with pytest.raises(TauOutOfRange):
        check_loss(1.2, r)


def test_problem_requires_intercept_column():
    y = np.arange(4.0)
    X = np.column_stack([np.arange(4.0), np.ones(4)])
    with pytest.raises(DimensionMismatch):
        QrProblem(y, X, 0.3)


def test_sample_quantile_special_case():
    # p = 1: the tau-quantile hyperplane of a scalar sample is its
    # ceil(n tau)-th order statistic
    y = np.array([3.0, 1.0, 2.0])
    sol = solve_qr(QrProblem(y, np.ones((3, 1)), 0.4))
    assert sol.beta[0] == 2.0
    assert abs(sol.objective - 1.0) <= 1e-12
    assert sol.fitted == (2,)
    assert sol.n_below == 1 and sol.n_above == 1


def test_two_point_line():
    # p = 2 through 2 of 3 points
    y = np.array([0.0, 1.0, 5.0])
    X = np.column_stack([np.ones(3), np.array([0.0, 1.0, 2.0])])
    sol = solve_qr(QrProblem(y, X, 0.7))
    # tau = 0.7 puts weight above: optimal line through (0,0) and (2,5)
    assert sol.fitted == (0, 2)
    assert np.allclose(sol.beta, [0.0, 2.5])
    assert abs(sol.objective - check_loss(0.7, np.array([1.0 - 2.5])).sum()) <= 1e-12


def test_matches_enumeration_oracle():
    rng = RNG(20)
    for _ in range(300):
        y, X, tau = random_instance(rng)
        sol = solve_qr(QrProblem(y, X, tau))
        assert abs(sol.objective - oracle_objective(y, X, tau)) <= 1e-9 * (
            1.0 + abs(sol.objective)
        )


def test_dual_box_and_coverage():
    rng = RNG(21)
    for _ in range(300):
        y, X, tau = random_instance(rng)
        n, p = X.shape
        sol = solve_qr(QrProblem(y, X, tau))
        assert np.all(sol.duals <= tau + 1e-10)
        assert np.all(sol.duals >= tau - 1.0 - 1e-10)
        assert sol.n_below <= n * tau <= sol.n_below + p
        assert sol.n_below + sol.n_above + p == n
        # psi matches tau / tau - 1 off the basis
        off = np.setdiff1d(np.arange(n), sol.fitted)
        expect = np.where(sol.residuals[off] > 0, tau, tau - 1.0)
        assert np.allclose(sol.psi[off], expect)


def test_zero_gradient_certificate():
    rng = RNG(22)
    for _ in range(100):
        y, X, tau = random_instance(rng)
        sol = solve_qr(QrProblem(y, X, tau))
        grad = X.T @ sol.psi
        assert float(np.abs(grad).max()) <= 1e-7 * (1.0 + float(np.abs(X).max()))


def test_residuals_exact_zero_on_fitted_rows():
    rng = RNG(23)
    y, X, tau = random_instance(rng, n_max=10)
    sol = solve_qr(QrProblem(y, X, tau))
    assert all(sol.residuals[i] == 0.0 for i in sol.fitted)


def test_scale_equivariance():
    rng = RNG(24)
    y, X, tau = random_instance(rng)
    base = solve_qr(QrProblem(y, X, tau))
    scaled = solve_qr(QrProblem(3.0 * y, X, tau))
    assert np.allclose(scaled.beta, 3.0 * base.beta, atol=1e-10)
    assert abs(scaled.objective - 3.0 * base.objective) <= 1e-9


def test_warm_start_agrees_with_cold():
    rng = RNG(25)
    for _ in range(40):
        y, X, tau = random_instance(rng)
        cold = solve_qr(QrProblem(y, X, tau))
        n, p = X.shape
        start = tuple(range(p))
        if abs(np.linalg.det(X[list(start)])) < 1e-8:
            continue
        warm = solve_qr(QrProblem(y, X, tau), initial_basis=start)
        assert abs(cold.objective - warm.objective) <= 1e-9 * (1 + abs(cold.objective))
        assert warm.fitted == cold.fitted


def test_deterministic_repeat():
    rng = RNG(26)
    y, X, tau = random_instance(rng)
    a = solve_qr(QrProblem(y, X, tau))
    b = solve_qr(QrProblem(y, X, tau))
    assert a.fitted == b.fitted
    assert np.array_equal(a.beta, b.beta)
    assert a.objective == b.objective


def test_rank_deficient_design_raises():
    y = np.arange(5.0)
    x = np.linspace(0.0, 1.0, 5)
    X = np.column_stack([np.ones(5), x, 2.0 * x])  # third column dependent
    with pytest.raises(DegenerateDesign):
        solve_qr(QrProblem(y, X, 0.33))


def test_dual_weights_recomputation():
    rng = RNG(27)
    y, X, tau = random_instance(rng)
    prob = QrProblem(y, X, tau)
    sol = solve_qr(prob)
    v = dual_weights(sol, prob)
    assert np.allclose(v, sol.duals, atol=1e-9)
