import numpy as np
import pytest

from natset.qpsolver import (
    DimensionMismatch,
    NoFeasibleActiveSet,
    QPSolution,
    QuadraticProgram,
    SolverSettings,
    SolverStatus,
    enumerate_oracle,
    solve,
)


def random_qps(count, seed):
    """Small random strictly convex programs with guaranteed feasibility."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, 4))
        k = int(rng.integers(0, 5))
        M = rng.standard_normal((n, n))
        P = M.T @ M + 0.1 * np.eye(n)
        q = rng.standard_normal(n)
        A = rng.standard_normal((k, n))
        feasible_point = rng.standard_normal(n)
        b = A @ feasible_point + rng.uniform(0.0, 1.0, size=k)
        out.append(QuadraticProgram(P, q, A, b))
    return out


def test_scalar_lower_bound():
    qp = QuadraticProgram([[2.0]], [0.0], [[-1.0]], [-1.0])
    sol = solve(qp)
    assert sol.status is SolverStatus.OPTIMAL
    assert sol.z[0] == pytest.approx(1.0, abs=1e-6)
    assert sol.objective == pytest.approx(1.0, abs=1e-6)


def test_unconstrained_projection():
    c = np.array([0.3, -1.7, 2.5])
    qp = QuadraticProgram(2 * np.eye(3), -2 * c, np.zeros((0, 3)), np.zeros(0))
    sol = solve(qp)
    assert sol.status is SolverStatus.OPTIMAL
    assert np.allclose(sol.z, c, atol=1e-8)


def test_oracle_trivial_examples():
    qp = QuadraticProgram([[2.0]], [0.0], [[-1.0]], [-1.0])
    sol = enumerate_oracle(qp)
    assert abs(sol.z[0] - 1.0) < 1e-10
    assert abs(sol.objective - 1.0) < 1e-10

    c = np.array([4.0, -2.0])
    qp = QuadraticProgram(2 * np.eye(2), -2 * c, np.zeros((0, 2)), np.zeros(0))
    assert np.max(np.abs(enumerate_oracle(qp).z - c)) < 1e-10


def test_infeasible_pair():
    # z <= 0 together with z >= 1
    qp = QuadraticProgram([[2.0]], [0.0], [[1.0], [-1.0]], [0.0, -1.0])
    with pytest.raises(NoFeasibleActiveSet):
        enumerate_oracle(qp)
    sol = solve(qp)
    assert sol.status is SolverStatus.INFEASIBLE


def test_degenerate_vertex_matches_oracle():
    # both rows active at the optimum (1, 0): project (2, 0) onto the wedge
    qp = QuadraticProgram(
        2 * np.eye(2), [-4.0, 0.0], [[1.0, 1.0], [1.0, -1.0]], [1.0, 1.0]
    )
    exact = enumerate_oracle(qp)
    assert np.allclose(exact.z, [1.0, 0.0], atol=1e-10)
    sol = solve(qp)
    assert sol.status is SolverStatus.OPTIMAL
    assert np.max(np.abs(sol.z - exact.z)) < 1e-6


def test_random_agreement_with_oracle():
    for qp in random_qps(30, seed=5):
        sol = solve(qp)
        exact = enumerate_oracle(qp)
        assert sol.status is SolverStatus.OPTIMAL
        assert abs(sol.objective - exact.objective) < 1e-5


def test_optimal_returns_carry_kkt_certificate():
    for qp in random_qps(20, seed=11):
        sol = solve(qp)
        assert sol.status is SolverStatus.OPTIMAL
        lam = sol.lam
        stat = np.max(np.abs(qp.P @ sol.z + qp.q + qp.A.T @ lam), initial=0.0)
        margins = qp.A @ sol.z - qp.b
        assert stat <= 1e-7 * (1.0 + np.max(np.abs(qp.q), initial=0.0)) + 1e-12
        assert np.max(margins, initial=0.0) <= 1e-7
        assert np.max(np.abs(lam * margins), initial=0.0) <= 1e-6
        assert np.min(lam, initial=0.0) >= -1e-9


def test_warm_restart_is_monotone():
    for qp in random_qps(10, seed=23):
        first = solve(qp)
        again = solve(qp, warm_start=first)
        assert again.status is SolverStatus.OPTIMAL
        assert again.iterations <= first.iterations
        assert again.iterations == 0


def test_scaling_leaves_minimizer_unchanged():
    for qp in random_qps(10, seed=31):
        scaled = QuadraticProgram(37.0 * qp.P, 37.0 * qp.q, qp.A, qp.b)
        assert np.max(np.abs(solve(qp).z - solve(scaled).z)) < 1e-7


def test_max_iter_status():
    qp = random_qps(1, seed=41)[0]
    sol = solve(qp, SolverSettings(max_iter=2))
    assert sol.status in (SolverStatus.MAX_ITER, SolverStatus.OPTIMAL)
    if sol.status is SolverStatus.MAX_ITER:
        assert sol.iterations == 2


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        QuadraticProgram(np.eye(2), np.zeros(3), np.zeros((0, 2)), np.zeros(0))
    with pytest.raises(DimensionMismatch):
        QuadraticProgram(np.eye(2), np.zeros(2), np.ones((1, 3)), np.ones(1))


def test_invalid_objective_rejected():
    with pytest.raises(ValueError):
        QuadraticProgram([[0.0, 1.0], [0.0, 0.0]], [0.0, 0.0], np.zeros((0, 2)), np.zeros(0))
    with pytest.raises(ValueError):
        QuadraticProgram([[-1.0]], [0.0], np.zeros((0, 1)), np.zeros(0))


def test_settings_validation():
    with pytest.raises(ValueError):
        SolverSettings(rho=0.0)
    with pytest.raises(ValueError):
        SolverSettings(alpha=2.0)


def test_oracle_refuses_large_row_count():
    qp = QuadraticProgram(np.eye(1), np.zeros(1), np.ones((17, 1)), np.ones(17))
    with pytest.raises(ValueError):
        enumerate_oracle(qp)


def test_solution_arrays_read_only():
    sol = solve(QuadraticProgram([[2.0]], [0.0], [[-1.0]], [-1.0]))
    with pytest.raises(ValueError):
        sol.z[0] = 99.0
