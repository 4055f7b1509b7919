import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qjoin.realizers import c6_integer_matrix, k2_c10_matrix
from qjoin.spectral import (
    GapPartition,
    Spectrum,
    c_feasible,
    c_of,
    c_of_bruteforce,
    c_of_dp,
    count_in_open_interval,
    eigendecompose,
    gap_multiplicity,
    interval_interlacing_bound_holds,
    parse_spectrum,
    q_of_list,
    spectrum_of,
    strictly_interlaces,
)

TABLE_LIST = (1, 2, 5, 5, 3, 1)


def exhaustive_c(m, t):
    """Min over every nondecreasing breakpoint tuple, straight from the definition."""
    k = len(m)
    best = math.inf
    for inner in itertools.combinations_with_replacement(range(1, k + 1), t - 2):
        p = (1,) + inner + (k,)
        worst = max(sum(m[a : b - 1]) if b > a else 0 for a, b in zip(p, p[1:]))
        best = min(best, worst)
    return best


lists = st.lists(st.integers(0, 9), min_size=1, max_size=8)
positive_ends = st.lists(st.integers(0, 9), min_size=0, max_size=6).flatmap(
    lambda mid: st.tuples(st.integers(1, 9), st.integers(1, 9)).map(lambda e: (e[0], *mid, e[1]))
)


# -- lists -------------------------------------------------------------------


@pytest.mark.parametrize("m, q", [((1, 3, 3, 1, 1), 5), ((1, 0, 2), 2), ((0, 0), 0)])
def test_q_of_list(m, q):
    assert q_of_list(m) == q


@pytest.mark.parametrize("a, b, want", [(4, 6, 3), (1, 2, 0), (1, 6, 15)])
def test_gap_multiplicity_table_rows(a, b, want):
    assert gap_multiplicity(TABLE_LIST, a, b) == want


@pytest.mark.parametrize("t, want", [(2, 15), (3, 7), (4, 3), (5, 2)])
def test_c_of_gap_table(t, want):
    value, witness = c_of(TABLE_LIST, t)
    assert value == want
    assert witness.max_gap(TABLE_LIST) == want


def test_c_of_witness_breakpoint():
    assert c_of(TABLE_LIST, 3)[1].p == (1, 4, 6)


def test_c_of_two_simple():
    assert c_of((1, 1), 2)[0] == 0


def test_c_of_rejects_small_t():
    with pytest.raises(ValueError):
        c_of((1, 2), 1)


def test_gap_partition_validation():
    with pytest.raises(ValueError):
        GapPartition((2, 3))
    with pytest.raises(ValueError):
        GapPartition((1, 3, 2))


@settings(max_examples=300, deadline=None)
@given(lists, st.integers(2, 8))
def test_c_of_matches_exhaustive(m, t):
    if t > len(m):
        t = max(2, len(m))
    if len(m) < 2:
        m = m + [1]
    want = exhaustive_c(m, t)
    assert c_of(m, t)[0] == want
    assert c_of_dp(m, t) == want
    assert c_of_bruteforce(m, t) == want


@settings(max_examples=200, deadline=None)
@given(lists.filter(lambda m: len(m) >= 2))
def test_c_of_nonincreasing_in_t(m):
    vals = [c_of(m, t)[0] for t in range(2, len(m) + 3)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


@settings(max_examples=200, deadline=None)
@given(lists.filter(lambda m: len(m) >= 2), st.integers(2, 9))
def test_witness_attains_value(m, t):
    value, witness = c_of(m, t)
    assert witness.t == t and witness.k == len(m)
    assert witness.max_gap(m) == value
    assert c_feasible(m, t, value)
    assert value == 0 or not c_feasible(m, t, value - 1)


@settings(max_examples=200, deadline=None)
@given(positive_ends, st.integers(2, 9))
def test_zero_exactly_when_few_values(m, t):
    # with positive end entries, C vanishes exactly when the list has at most t positive entries
    assert (c_of(m, t)[0] == 0) == (q_of_list(m) <= t)


# -- spectra -------------------------------------------------------------------


def test_parse_spectrum_syntax():
    s = parse_spectrum("1,2:3,3:3,4,5")
    assert s.values == (1, 2, 3, 4, 5)
    assert s.multiplicities == (1, 3, 3, 1, 1)
    assert s.dimension == 9


def test_spectrum_json_round_trip():
    s = parse_spectrum("-2:2,-1,1,2:2")
    assert Spectrum.from_json(s.to_json()) == s


def test_spectrum_rejects_bad_entries():
    with pytest.raises(ValueError):
        Spectrum(((1.0, 0),))
    with pytest.raises(ValueError):
        Spectrum(((2.0, 1), (1.0, 1)))


def test_shifted_applies_bordering_rule():
    s = parse_spectrum("1,2:3,3:3,4,5").shifted(decrement=(2, 4), increment=(1, 3, 5))
    assert s == parse_spectrum("1:2,2:2,3:4,5:2")


@pytest.mark.parametrize(
    "text, a, b, want",
    [("1,2:3,3:3,4,5", 1, 3, 3), ("1,2:3,3:3,4,5", -math.inf, math.inf, 9), ("-2:2,-1,1,2:2", -1, 2, 1)],
)
def test_count_in_open_interval(text, a, b, want):
    assert count_in_open_interval(parse_spectrum(text), a, b) == want


@pytest.mark.parametrize(
    "N, R0, want", [((-2, 0, 2), (-1, 1), True), ((-2, 2), (1,), True), ((0, 1, 2), (1, 3), False)]
)
def test_strictly_interlaces(N, R0, want):
    assert strictly_interlaces(N, R0) is want


def test_interval_interlacing_examples():
    sA = parse_spectrum("-2:2,-1,1,2:2")
    assert interval_interlacing_bound_holds(sA, parse_spectrum("-2:3,0,2:3"), 1)
    assert interval_interlacing_bound_holds(sA, sA, 0)
    assert not interval_interlacing_bound_holds(parse_spectrum("0:2"), parse_spectrum("5:2,6"), 1)


def sym_matrices(max_n=8):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.floats(-5, 5), min_size=n * n, max_size=n * n).map(
            lambda xs: (lambda M: (M + M.T) / 2)(np.array(xs).reshape(n, n))
        )
    )


@settings(max_examples=150, deadline=None)
@given(sym_matrices(), st.integers(0, 2**31))
def test_cauchy_interlacing_for_random_borders(A, seed):
    rng = np.random.default_rng(seed)
    n = A.shape[0]
    col = rng.normal(size=n)
    M = np.block([[np.array([[rng.normal()]]), col[None, :]], [col[:, None], A]])
    sA, sM = spectrum_of(A, 1e-9), spectrum_of(M, 1e-9)
    assert interval_interlacing_bound_holds(sA, sM, 1, 1e-9)


@settings(max_examples=150, deadline=None)
@given(sym_matrices())
def test_eigendecompose_reconstructs(A):
    w, V = eigendecompose(A)
    assert np.all(np.diff(w) >= 0)
    err = np.max(np.abs(V.T @ A @ V - np.diag(w)))
    assert err <= 1e-9 * (1 + np.max(np.abs(A)))


@pytest.mark.parametrize(
    "A, want",
    [
        (np.eye(3), [1, 1, 1]),
        (np.diag([2.0, -1.0]), [-1, 2]),
        (c6_integer_matrix(), [-2, -2, -1, 1, 2, 2]),
    ],
)
def test_eigendecompose_examples(A, want):
    assert np.allclose(eigendecompose(A)[0], want, atol=1e-12)


def test_spectrum_of_clusters():
    assert spectrum_of(np.diag([1, 1 + 1e-12, 5])) == Spectrum(((1 + 5e-13, 2), (5.0, 1)))
    assert spectrum_of(np.diag([0.0, 1.0])).multiplicities == (1, 1)
    s = spectrum_of(k2_c10_matrix(), 1e-2)
    assert s.multiplicities == (4, 4, 4)
    assert np.allclose(s.values, [-6, 0, 6], atol=5e-3)


def test_spectrum_of_rejects_asymmetric():
    with pytest.raises(ValueError):
        spectrum_of(np.array([[0.0, 1.0], [0.0, 0.0]]))
