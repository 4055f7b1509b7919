import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qjoin.errors import NonConvergence
from qjoin.graphs import cycle, hypercube, path, respects_pattern
from qjoin.realizers import (
    IepOptions,
    c6_integer_basis,
    c6_integer_matrix,
    cycle_spectrum_valid,
    hypercube_realizer,
    iep_solve,
    jacobi_from_spectrum,
)
from qjoin.spectral import parse_spectrum, spectrum_of


def test_jacobi_small():
    assert np.array_equal(jacobi_from_spectrum([0.0]), np.zeros((1, 1)))
    J = jacobi_from_spectrum([-1.0, 1.0])
    assert abs(J[0, 1]) > 0
    assert np.allclose(np.linalg.eigvalsh(J), [-1, 1])


def test_jacobi_rejects_repeats():
    with pytest.raises(ValueError):
        jacobi_from_spectrum([1.0, 1.0, 2.0])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=1, max_size=12, unique=True), st.integers(0, 1000))
def test_jacobi_round_trip(values, seed):
    lam = np.sort(values)
    if len(lam) > 1 and np.min(np.diff(lam)) < 1e-2:
        return
    J = jacobi_from_spectrum(lam, seed)
    assert np.max(np.abs(np.linalg.eigvalsh(J) - lam)) <= 1e-9 * max(1.0, np.max(np.abs(lam)))
    assert respects_pattern(J, path(len(lam)), 0.0)


def test_hypercube_two_by_two():
    B, v = hypercube_realizer(1, 0.6)
    assert np.allclose(B, [[0.6, 0.8], [0.8, -0.6]])
    assert np.allclose(B @ v, v)


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
def test_hypercube_involution(t):
    B, v = hypercube_realizer(t, 0.1)
    assert np.allclose(B, B.T)
    assert np.max(np.abs(B @ B - np.eye(2**t))) <= 1e-10
    assert respects_pattern(B, hypercube(t))
    assert spectrum_of(B).multiplicities == (2 ** (t - 1), 2 ** (t - 1))
    assert np.min(np.abs(v)) > 1e-7
    assert np.allclose(B @ v, v)


def test_hypercube_rejects_bad_alpha():
    with pytest.raises(ValueError):
        hypercube_realizer(2, 1.0)


@pytest.mark.parametrize(
    "lams, want",
    [((2, 2, 1, 1, -2, -2), True), ((3, 3, 3, 0, 0, 0), False), ((6, 6, 4, 2, 0, 0, -2, -4, -6, -6), True)],
)
def test_cycle_spectrum_valid_examples(lams, want):
    assert cycle_spectrum_valid(lams) is want


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 10), st.integers(0, 2**31))
def test_cycle_spectrum_valid_on_random_cycles(n, seed):
    rng = np.random.default_rng(seed)
    A = np.diag(rng.normal(size=n))
    for i in range(n):
        j = (i + 1) % n
        A[i, j] = A[j, i] = rng.choice([-1, 1]) * rng.uniform(0.2, 2)
    lam = np.sort(np.linalg.eigvalsh(A))[::-1]
    assert cycle_spectrum_valid(lam, 1e-9)


def test_c6_integer_matrix():
    A = c6_integer_matrix()
    assert respects_pattern(A, cycle(6))
    U = c6_integer_basis()
    assert np.allclose(U.T @ U, np.eye(2))
    assert np.allclose(A @ U, U * np.array([1.0, -1.0]))


@pytest.mark.parametrize(
    "graph, text",
    [
        (cycle(6), "-2:2,-1,1,2:2"),
        (path(4), "1,2,3,4"),
        (cycle(10), "-6:2,-4,-2,0:2,2,4,6:2"),
        (cycle(6), "-2:2,0:2,2:2"),
    ],
)
def test_iep_solve_feasible_targets(graph, text):
    target = parse_spectrum(text)
    A = iep_solve(graph, target, IepOptions(seed=1))
    assert respects_pattern(A, graph, IepOptions().edge_floor / 2)
    assert np.max(np.abs(np.linalg.eigvalsh(A) - target.eigenvalues())) <= IepOptions().residual_tol


def test_iep_solve_reports_infeasible():
    # a path cannot carry a repeated eigenvalue
    with pytest.raises(NonConvergence) as info:
        iep_solve(path(3), parse_spectrum("1:2,2"), IepOptions(restarts=2))
    assert info.value.best_residual > IepOptions().residual_tol


def test_iep_solve_is_seeded():
    target = parse_spectrum("-2:2,-1,1,2:2")
    a = iep_solve(cycle(6), target, IepOptions(seed=5))
    b = iep_solve(cycle(6), target, IepOptions(seed=5))
    assert np.array_equal(a, b)


def test_iep_solve_dimension_check():
    with pytest.raises(ValueError):
        iep_solve(cycle(6), parse_spectrum("1,2,3"))
