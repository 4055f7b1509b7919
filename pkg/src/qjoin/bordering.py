"""One-row borderings with prescribed multiplicity changes.

A 1-bordering ``[[alpha, (U0 b)^T], [U0 b, A]]`` built from unit eigenvectors
``U0`` of ``A`` (eigenvalues ``R0``) and an arrow matrix with spectrum ``N``
removes one copy of each eigenvalue in ``R0`` and adds one copy of each value
in ``N``. Everything else in this module is bookkeeping on top of that.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from qjoin.errors import NowhereZeroFailure
from qjoin.graphs import pattern_of
from qjoin.rng import make_rng, random_unit_vector
from qjoin.spectral import (
    DEFAULT_CLUSTER_TOL,
    Spectrum,
    as_symmetric,
    c_of,
    eigendecompose,
    spectrum_of,
    strictly_interlaces,
)

NOWHERE_ZERO_THRESHOLD = 1e-7
DEFAULT_ROTATION_BUDGET = 64
BOUNDARY_TOL = 1e-7  # eigenvalues this close to a kept boundary count as the boundary


@dataclass(frozen=True)
class BorderingSpec:
    """Eigenvalues to remove once (``remove``) and to add once (``add``)."""

    remove: tuple[float, ...]
    add: tuple[float, ...]

    def __post_init__(self):
        rem = tuple(sorted(float(x) for x in self.remove))
        add = tuple(sorted(float(x) for x in self.add))
        if len(set(rem)) != len(rem) or len(set(add)) != len(add):
            raise ValueError("remove and add must each be sets of distinct values")
        if not strictly_interlaces(add, rem):
            raise ValueError(f"add={add} does not strictly interlace remove={rem}")
        object.__setattr__(self, "remove", rem)
        object.__setattr__(self, "add", add)


@dataclass(frozen=True, eq=False)
class BorderingStep:
    spec: BorderingSpec
    alpha: float
    b: np.ndarray
    U0: np.ndarray
    result: np.ndarray
    removed: tuple[float, ...] = field(default=())  # eigenvalues of A actually used for R0

    def spectrum(self, tol: float = DEFAULT_CLUSTER_TOL) -> Spectrum:
        return spectrum_of(self.result, tol)

    def border_vector(self) -> np.ndarray:
        return self.U0 @ self.b


def boley_golub(d: Sequence[float], N: Sequence[float]) -> tuple[float, np.ndarray]:
    """Arrow matrix ``[[alpha, b^T], [b, diag(d)]]`` with spectrum ``N``.

    ``d`` must be distinct and strictly interlaced by ``N``; every ``b_i`` is
    the positive root, returned in the order of ``d``.
    """
    d = np.asarray(d, dtype=float).reshape(-1)
    N = np.sort(np.asarray(N, dtype=float).reshape(-1))
    if N.size != d.size + 1:
        raise ValueError(f"need |N| = |d| + 1, got {N.size} and {d.size}")
    if not strictly_interlaces(list(N), sorted(d)):
        raise ValueError(f"N={list(N)} does not strictly interlace d={sorted(d)}")
    alpha = float(N.sum() - d.sum())
    # interlacing makes the radicand positive, so work with log-magnitudes
    b = np.empty(d.size)
    for i, di in enumerate(d):
        others = np.delete(d, i)
        b[i] = np.exp(0.5 * (np.log(np.abs(di - N)).sum() - np.log(np.abs(di - others)).sum()))
    return alpha, b


def arrow_matrix(alpha: float, b, d) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    M = np.diag(np.concatenate([[alpha], d]))
    M[0, 1:] = M[1:, 0] = b
    return M


def border_with_vectors(A, U0, d, N) -> tuple[float, np.ndarray, np.ndarray]:
    """Border ``A`` by ``U0 b`` where ``U0``'s columns are unit eigenvectors for ``d``."""
    alpha, b = boley_golub(d, N)
    n = A.shape[0]
    out = np.empty((n + 1, n + 1))
    out[0, 0] = alpha
    col = U0 @ b if len(d) else np.zeros(n)
    out[1:, 0] = out[0, 1:] = col
    out[1:, 1:] = A
    return alpha, b, out


def _eigenspace(w, V, lam, tol):
    idx = np.flatnonzero(np.abs(w - lam) <= tol)
    if idx.size == 0:
        raise ValueError(f"{lam} is not an eigenvalue (tolerance {tol})")
    # widen to the whole single-linkage cluster
    lo, hi = idx[0], idx[-1]
    while lo > 0 and w[lo] - w[lo - 1] <= tol:
        lo -= 1
    while hi + 1 < len(w) and w[hi + 1] - w[hi] <= tol:
        hi += 1
    return float(w[lo : hi + 1].mean()), V[:, lo : hi + 1]


def border_once(
    A, spec: BorderingSpec, basis_seed: int = 0, cluster_tol: float = DEFAULT_CLUSTER_TOL
) -> BorderingStep:
    """Border ``A`` so that ``spec.remove`` lose one copy and ``spec.add`` gain one.

    Each eigenvector in ``U0`` is a seeded random unit vector of the relevant
    eigenspace.
    """
    A = as_symmetric(A)
    w, V = eigendecompose(A)
    reps, cols = [], []
    for i, lam in enumerate(spec.remove):
        rep, E = _eigenspace(w, V, lam, cluster_tol)
        reps.append(rep)
        cols.append(E @ random_unit_vector(E.shape[1], make_rng(basis_seed, i)))
    U0 = np.column_stack(cols) if cols else np.zeros((A.shape[0], 0))
    alpha, b, out = border_with_vectors(A, U0, reps, spec.add)
    return BorderingStep(spec, alpha, b, U0, out, tuple(reps))


def nowhere_zero_bordering(
    A,
    lam: float,
    N: Sequence[float],
    seed: int = 0,
    budget: int = DEFAULT_ROTATION_BUDGET,
    threshold: float = NOWHERE_ZERO_THRESHOLD,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    vector=None,
) -> BorderingStep:
    """1-bordering whose new row is nowhere zero off the corner, so the result is in S(K1 v G(A)).

    Removes ``lam`` once and adds the two values of ``N`` (one below, one
    above ``lam``). Searches seeded unit vectors of the ``lam``-eigenspace for
    one with no entry below ``threshold``; ``vector`` skips the search.
    """
    A = as_symmetric(A)
    if pattern_of(A).graph.num_edges == 0:
        raise ValueError("G(A) has no edges; nothing to join against")
    N = sorted(float(x) for x in N)
    if len(N) != 2 or not N[0] < lam < N[1]:
        raise ValueError(f"need N = (mu1, mu2) with mu1 < {lam} < mu2, got {N}")
    spec = BorderingSpec((lam,), tuple(N))
    w, V = eigendecompose(A)
    rep, E = _eigenspace(w, V, lam, cluster_tol)
    if vector is not None:
        u = np.asarray(vector, dtype=float)
        u = u / np.linalg.norm(u)
        if np.linalg.norm(A @ u - rep * u) > 1e-8 * max(1.0, np.abs(A).max()):
            raise ValueError("supplied vector is not an eigenvector for lam")
        candidates = [u]
    else:
        tries = 1 if E.shape[1] == 1 else budget
        candidates = (E @ random_unit_vector(E.shape[1], make_rng(seed, k)) for k in range(tries))
    best, attempts = 0.0, 0
    for u in candidates:
        attempts += 1
        smallest = float(np.min(np.abs(u)))
        if smallest > threshold:
            U0 = u[:, None]
            alpha, b, out = border_with_vectors(A, U0, [rep], N)
            return BorderingStep(spec, alpha, b, U0, out, (rep,))
        best = max(best, smallest)
    raise NowhereZeroFailure(
        f"no nowhere-zero eigenvector for {lam} in {attempts} attempts (best min |entry| {best:.3g})",
        best_min_abs=best,
        attempts=attempts,
    )


# -- Algorithm 1 -------------------------------------------------------------

Chooser = Callable[[Spectrum, tuple, int], BorderingSpec]


def lowest_representative_chooser(current: Spectrum, boundaries: tuple, remaining: int) -> BorderingSpec:
    """Reduce every gap interval whose count equals the remaining budget.

    Removes the lowest eigenvalue in each such interval and adds the left end
    of the first one plus the right end of each.
    """
    chosen = []
    for lo, hi in zip(boundaries, boundaries[1:]):
        eps = BOUNDARY_TOL * max(1.0, abs(lo), abs(hi))
        inside = [v for v in current.values if lo + eps < v < hi - eps]
        count = sum(current.multiplicity(v) for v in inside)
        if inside and count >= remaining:
            chosen.append((lo, hi, inside[0]))
    if not chosen:
        raise ValueError("no gap interval attains the remaining budget")
    remove = tuple(v for _, _, v in chosen)
    add = (chosen[0][0],) + tuple(hi for _, hi, _ in chosen)
    return BorderingSpec(remove, add)


def algorithm1(
    A,
    t: int,
    chooser: Chooser = lowest_representative_chooser,
    seed: int = 0,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
) -> list[BorderingStep]:
    """Successive 1-borderings driving ``C(m, t)`` to zero, one unit per step.

    The gap partition is fixed once (lexicographically smallest optimum) and
    its boundary eigenvalues are handed to ``chooser`` with the current
    spectrum and the number of steps left.
    """
    if t < 2:
        raise ValueError("t must be at least 2")
    A = as_symmetric(A)
    start = spectrum_of(A, cluster_tol)
    if start.q <= t:
        return []
    r, witness = c_of(start.multiplicities, t)
    boundaries = tuple(start.values[p - 1] for p in witness.p)
    steps: list[BorderingStep] = []
    current, spec_now, before = A, start, r
    for ell in range(r):
        spec = chooser(spec_now, boundaries, r - ell)
        step = border_once(current, spec, int(make_rng(seed, ell).integers(2**62)), cluster_tol)
        after_spec = spectrum_of(step.result, cluster_tol)
        after = c_of(after_spec.multiplicities, t)[0] if after_spec.q >= 2 else 0
        if after != before - 1:
            raise ValueError(f"step {ell + 1} changed C from {before} to {after}; expected a drop of one")
        steps.append(step)
        current, spec_now, before = step.result, after_spec, after
    return steps


# -- multiplicity bookkeeping ----------------------------------------------


def up_down_necessary(sA: Spectrum, sA1: Spectrum, sA2: Spectrum, tol: float = DEFAULT_CLUSTER_TOL) -> bool:
    """Whether some eigenvalue of the middle matrix gains one copy and then loses it.

    If this is false, any chain ``A -> A' -> A''`` of 1-borderings with these
    spectra has a zero in position (1, 2) of ``A''``.
    """
    n = sA.dimension
    if sA1.dimension != n + 1 or sA2.dimension != n + 2:
        raise ValueError(f"dimensions must be n, n+1, n+2; got {n}, {sA1.dimension}, {sA2.dimension}")
    for lam, m1 in sA1.entries:
        if sA2.multiplicity(lam, tol) == m1 - 1 == sA.multiplicity(lam, tol):
            return True
    return False


def join_q_lower_bound(m: Sequence[int], g_size: int) -> int:
    """Smallest ``t >= 2`` with ``C(m, t) <= g_size``."""
    if g_size < 1:
        raise ValueError("g_size must be at least 1")
    k = len(m)
    if k < 2:
        return 2
    for t in range(2, k + 1):
        if c_of(m, t)[0] <= g_size:
            return t
    return k


def _alternating_form(m: Sequence[int], t: int):
    """Return ``k`` if ``m = (m1, k, m2, k, ..., k, mt)`` with all ``m_i >= k >= t``, else ``None``."""
    m = list(m)
    if len(m) != 2 * t - 1:
        return None
    outer, inner = m[0::2], m[1::2]
    k = inner[0]
    if any(x != k for x in inner) or k < t or any(x < k for x in outer):
        return None
    return k


def monotone_obstruction(m: Sequence[int], t: int) -> bool:
    """True when ``m`` has the alternating shape ``(m1, k, m2, ..., k, mt)`` with ``m_i >= k >= t``.

    For such lists every k-bordering reaching ``t`` distinct eigenvalues has
    an empty leading k x k pattern, so no nonempty graph on k vertices joins
    to give ``q <= t``.
    """
    if t < 2:
        raise ValueError("t must be at least 2")
    return _alternating_form(m, t) is not None


def verify_prop51_evolution(
    steps: Sequence[Spectrum], t: int, tol: float = DEFAULT_CLUSTER_TOL
) -> bool:
    """Check ``m(A_j) = (m1+j, k-j, m2+j, ..., k-j, mt+j)`` along a bordering chain.

    The eigenvalues themselves must stay put; an inner eigenvalue that has
    reached multiplicity zero must stay absent.
    """
    if not steps:
        raise ValueError("need at least one spectrum")
    first = steps[0]
    k = _alternating_form(first.multiplicities, t)
    if k is None:
        raise ValueError("first spectrum does not have the alternating (m1, k, ..., k, mt) shape")
    for j, s in enumerate(steps):
        if s.dimension != first.dimension + j:
            raise ValueError("spectra must grow by one per step")
        if j > k:
            return False
        expected = [(v, m + j if i % 2 == 0 else m - j) for i, (v, m) in enumerate(first.entries)]
        expected = [(v, m) for v, m in expected if m > 0]
        if s.multiplicities != tuple(m for _, m in expected):
            return False
        if any(abs(v - w) > tol * max(1.0, abs(v)) for (v, _), w in zip(expected, s.values)):
            return False
    return True
