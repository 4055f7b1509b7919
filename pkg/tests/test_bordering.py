import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qjoin.bordering import (
    BorderingSpec,
    algorithm1,
    arrow_matrix,
    boley_golub,
    border_once,
    join_q_lower_bound,
    monotone_obstruction,
    nowhere_zero_bordering,
    up_down_necessary,
    verify_prop51_evolution,
)
from qjoin.errors import NowhereZeroFailure
from qjoin.graphs import complete, cycle, hypercube, join, respects_pattern
from qjoin.realizers import IepOptions, c6_integer_matrix, hypercube_realizer, iep_solve
from qjoin.rng import make_rng, random_orthogonal
from qjoin.spectral import c_of, interval_interlacing_bound_holds, parse_spectrum, spectrum_of


def rotated(spectrum_text, seed=0):
    lam = parse_spectrum(spectrum_text).eigenvalues()
    Q = random_orthogonal(len(lam), make_rng(seed, 7))
    return Q @ np.diag(lam) @ Q.T


def interlacing_instance(rng, max_n=8):
    """Random A with repeated integer eigenvalues plus a valid bordering spec."""
    n = int(rng.integers(1, max_n + 1))
    vals = rng.integers(-4, 5, size=n).astype(float)
    Q = np.linalg.qr(rng.normal(size=(n, n)))[0]
    A = Q @ np.diag(vals) @ Q.T
    distinct = sorted(set(vals))
    R0 = sorted(rng.choice(distinct, size=int(rng.integers(0, len(distinct) + 1)), replace=False))
    bounds = [R0[0] - 3 if R0 else -6.0] + list(R0) + [R0[-1] + 3 if R0 else 6.0]
    N = []
    for lo, hi in zip(bounds, bounds[1:]):
        existing = [v for v in distinct if lo < v < hi]
        if existing and rng.random() < 0.5:
            N.append(float(rng.choice(existing)))
        else:
            # a fresh value kept away from every eigenvalue
            while True:
                x = float(rng.uniform(lo, hi))
                if min(abs(x - v) for v in distinct + [lo, hi]) > 1e-3:
                    break
            N.append(x)
    return A, vals, BorderingSpec(tuple(R0), tuple(N))


def expected_multiplicities(vals, spec):
    acc = {}
    for v in vals:
        acc[v] = acc.get(v, 0) + 1
    for r in spec.remove:
        acc[r] -= 1
    for x in spec.add:
        acc[x] = acc.get(x, 0) + 1
    return tuple(m for _, m in sorted(acc.items()) if m > 0), tuple(v for v, m in sorted(acc.items()) if m > 0)


# -- arrow matrices ------------------------------------------------------------


def test_boley_golub_c6_case():
    alpha, b = boley_golub([1.0, -1.0], [-2.0, 0.0, 2.0])
    assert alpha == pytest.approx(0.0)
    assert np.allclose(b, [math.sqrt(3) * math.sqrt(0.5)] * 2)


def test_boley_golub_one_by_one():
    alpha, b = boley_golub([], [4.5])
    assert alpha == 4.5 and b.size == 0


def test_boley_golub_rejects_non_interlacing():
    with pytest.raises(ValueError):
        boley_golub([0.0, 1.0], [0.5, 0.7, 2.0])


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 6), st.integers(0, 2**31))
def test_boley_golub_characteristic_polynomial(k, seed):
    rng = np.random.default_rng(seed)
    pts = np.sort(rng.uniform(-10, 10, 2 * k + 1))
    if np.min(np.diff(pts), initial=1.0) < 1e-3:
        return
    N, d = pts[0::2], rng.permutation(pts[1::2])
    alpha, b = boley_golub(d, N)
    assert np.all(b > 0)
    B = arrow_matrix(alpha, b, d)
    # det(xI - B) against prod(x - mu) at |N| + 1 sample points
    for x in rng.uniform(-12, 12, k + 2):
        lhs = np.linalg.det(x * np.eye(k + 1) - B)
        rhs = np.prod(x - N)
        assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-8)
    assert np.max(np.abs(np.linalg.eigvalsh(B) - N)) <= 1e-10 * max(1.0, np.max(np.abs(N)))


# -- single borderings -----------------------------------------------------------


def test_border_once_c6():
    step = border_once(c6_integer_matrix(), BorderingSpec((-1, 1), (-2, 0, 2)))
    # seven eigenvalues: 2 keeps both copies and gains one
    assert step.spectrum().isclose(parse_spectrum("-2:3,0,2:3"))


def test_border_once_one_by_one():
    step = border_once(np.zeros((1, 1)), BorderingSpec((0,), (-1, 1)))
    assert step.spectrum().isclose(parse_spectrum("-1,1"))


def test_border_once_diagonal_chain_step():
    A = np.diag(parse_spectrum("1,2:3,3:3,4,5").eigenvalues())
    step = border_once(A, BorderingSpec((2, 4), (1, 3, 5)))
    assert step.spectrum().isclose(parse_spectrum("1:2,2:2,3:4,5:2"))


def test_border_once_rejects_non_eigenvalue():
    with pytest.raises(ValueError):
        border_once(np.diag([1.0, 2.0]), BorderingSpec((1.5,), (1, 2)))


def test_spec_rejects_bad_interlacing():
    with pytest.raises(ValueError):
        BorderingSpec((1, 3), (0, 1, 2))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**31))
def test_border_once_shift_law(seed):
    rng = np.random.default_rng(seed)
    A, vals, spec = interlacing_instance(rng)
    step = border_once(A, spec, basis_seed=seed)
    got = spectrum_of(step.result, 1e-8)
    mults, values = expected_multiplicities(vals, spec)
    assert got.multiplicities == mults
    assert np.allclose(got.values, values, atol=1e-8)
    assert interval_interlacing_bound_holds(spectrum_of(A, 1e-8), got, 1)
    assert np.allclose(step.U0.T @ step.U0, np.eye(len(spec.remove)), atol=1e-10)


# -- nowhere-zero borderings -------------------------------------------------------


def test_nowhere_zero_hypercube():
    B, v = hypercube_realizer(2, 0.1)
    step = nowhere_zero_bordering(B, 1.0, (-1.0, 3.0))
    assert respects_pattern(step.result, join(complete(1), hypercube(2)))
    assert step.spectrum().q == 3


def test_nowhere_zero_inner_eigenvalue_keeps_q():
    A = iep_solve(cycle(6), parse_spectrum("-2:2,0:2,2:2"), IepOptions(seed=3))
    step = nowhere_zero_bordering(A, 0.0, (-2.0, 2.0))
    assert respects_pattern(step.result, join(complete(1), cycle(6)))
    assert step.spectrum().q == spectrum_of(A).q == 3


def test_nowhere_zero_rejects_edgeless():
    with pytest.raises(ValueError):
        nowhere_zero_bordering(np.diag([5.0]), 5.0, (4.0, 6.0))


def test_nowhere_zero_reports_failure():
    # every eigenvector of a diagonal matrix with simple eigenvalues has zeros
    A = np.diag([1.0, 2.0, 3.0]) + 1e-3 * (np.diag([1.0, 0.0], 1) + np.diag([1.0, 0.0], -1))
    with pytest.raises(NowhereZeroFailure) as info:
        nowhere_zero_bordering(A, 3.0, (2.5, 4.0), budget=4)
    assert info.value.attempts == 1


# -- bordering chains --------------------------------------------------------------


def test_algorithm1_chain_spectra():
    steps = algorithm1(rotated("1,2:3,3:3,4,5"), 3)
    got = [s.spectrum() for s in steps]
    want = ["1:2,2:2,3:4,4,5", "1:3,2,3:5,4,5", "1:4,3:6,5:2"]
    assert len(got) == 3
    for g, w in zip(got, want):
        assert g.isclose(parse_spectrum(w))


def test_algorithm1_noop_when_few_values():
    assert algorithm1(rotated("1:2,3"), 2) == []


def test_algorithm1_c6():
    steps = algorithm1(c6_integer_matrix(), 2)
    assert len(steps) == 2
    assert steps[-1].spectrum().isclose(parse_spectrum("-2:4,2:4"))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=2, max_size=6), st.integers(2, 4), st.integers(0, 1000))
def test_algorithm1_drops_one_per_step(m, t, seed):
    text = ",".join(f"{i}:{x}" for i, x in enumerate(m, 1))
    A = rotated(text, seed)
    r = c_of(m, t)[0] if len(m) > t else 0
    steps = algorithm1(A, t, seed=seed)
    assert len(steps) == r
    prev = r
    for step in steps:
        now = c_of(step.spectrum().multiplicities, t)[0] if step.spectrum().q > 1 else 0
        assert now == prev - 1
        prev = now
    final = steps[-1].result if steps else A
    assert spectrum_of(final).q <= t
    assert final.shape[0] == A.shape[0] + r


# -- multiplicity bookkeeping --------------------------------------------------------


def test_up_down_c6():
    assert up_down_necessary(
        parse_spectrum("-2:2,-1,1,2:2"), parse_spectrum("-2:3,0,2:3"), parse_spectrum("-2:4,2:4")
    )


def test_up_down_third_column_with_equal_symbols():
    lam = 3.5
    s0 = parse_spectrum("1,2:3,3:3,4,5")
    s1 = parse_spectrum(f"1:2,2:2,3:3,{lam},5:2")
    s2 = parse_spectrum(f"1:3,2,3:3,{lam},5:3")
    assert not up_down_necessary(s0, s1, s2)


def test_up_down_small_chain():
    # -1 enters at the first bordering and leaves at the second
    assert up_down_necessary(parse_spectrum("0"), parse_spectrum("-1,1"), parse_spectrum("-2,0,2"))


def test_up_down_dimension_check():
    with pytest.raises(ValueError):
        up_down_necessary(parse_spectrum("0"), parse_spectrum("0"), parse_spectrum("0"))


@pytest.mark.parametrize("m, g, want", [((2, 2, 2, 2, 2), 2, 3), ((1, 1), 1, 2), ((1, 2, 5, 5, 3, 1), 7, 3)])
def test_join_q_lower_bound(m, g, want):
    assert join_q_lower_bound(m, g) == want


@pytest.mark.parametrize(
    "m, t, want", [((2, 2, 2), 2, True), ((2, 2, 5, 2, 2), 2, False), ((1, 2, 1), 2, False), ((3, 3, 4, 3, 3), 3, True)]
)
def test_monotone_obstruction(m, t, want):
    assert monotone_obstruction(m, t) is want


def test_prop51_evolution():
    chain = [parse_spectrum("-2:2,0:2,2:2"), parse_spectrum("-2:3,0,2:3"), parse_spectrum("-2:4,2:4")]
    assert verify_prop51_evolution(chain, 2)
    assert verify_prop51_evolution(chain[:1], 2)
    reused = [chain[0], parse_spectrum("-2:3,0,2:3"), parse_spectrum("-2:3,0,2:4")]
    assert not verify_prop51_evolution(reused, 2)
