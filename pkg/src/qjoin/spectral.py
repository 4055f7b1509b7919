"""Spectra, ordered multiplicity lists, interlacing and the gap optimizer.

The gap optimizer ``c_of`` answers: given an ordered multiplicity list ``m``
of length ``k`` and ``t`` breakpoints ``1 = p_1 <= ... <= p_t = k``, what is
the smallest achievable value of the largest total multiplicity strictly
between two consecutive breakpoints? That number is exactly how many
1-borderings are needed before a matrix with list ``m`` can be reduced to at
most ``t`` distinct eigenvalues.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

DEFAULT_CLUSTER_TOL = 1e-8
SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """Distinct eigenvalues (strictly increasing) with positive multiplicities.

    ``ambiguous`` is set by :func:`spectrum_of` when two clusters ended up
    closer than ten times the clustering tolerance.
    """

    entries: tuple[tuple[float, int], ...]
    ambiguous: bool = False

    def __post_init__(self):
        entries = tuple((float(v), int(m)) for v, m in self.entries)
        for v, m in entries:
            if not math.isfinite(v):
                raise ValueError(f"non-finite eigenvalue {v}")
            if m < 1:
                raise ValueError(f"multiplicity must be positive, got {m} for {v}")
        for (a, _), (b, _) in zip(entries, entries[1:]):
            if not a < b:
                raise ValueError("spectrum values must be strictly increasing")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_pairs(cls, pairs):
        """Build from unordered ``(value, multiplicity)`` pairs; equal values merge."""
        acc: dict[float, int] = {}
        for v, m in pairs:
            if int(m) < 0:
                raise ValueError("negative multiplicity")
            if int(m) == 0:
                continue
            acc[float(v)] = acc.get(float(v), 0) + int(m)
        return cls(tuple(sorted(acc.items())))

    @classmethod
    def from_values(cls, values, tol=DEFAULT_CLUSTER_TOL):
        """Cluster a list of (possibly repeated) eigenvalues."""
        return _cluster(np.sort(np.asarray(values, dtype=float)), tol)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for v, _ in self.entries)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.entries)

    @property
    def q(self) -> int:
        return len(self.entries)

    @property
    def dimension(self) -> int:
        return sum(self.multiplicities)

    def eigenvalues(self) -> np.ndarray:
        """All eigenvalues with repetition, nondecreasing."""
        return np.repeat(np.array(self.values, dtype=float), self.multiplicities)

    def multiplicity(self, value, tol=0.0) -> int:
        for v, m in self.entries:
            if abs(v - value) <= tol:
                return m
        return 0

    def shifted(self, decrement=(), increment=(), tol=DEFAULT_CLUSTER_TOL) -> "Spectrum":
        """Apply a bordering multiplicity shift: -1 on ``decrement``, +1 on ``increment``.

        Values in ``increment`` within ``tol`` of an existing eigenvalue are
        matched to it.
        """
        acc = dict(self.entries)
        for lam in decrement:
            key = _match(acc, lam, tol)
            if key is None or acc[key] < 1:
                raise ValueError(f"{lam} is not an eigenvalue")
            acc[key] -= 1
        for lam in increment:
            key = _match(acc, lam, tol)
            if key is None:
                acc[float(lam)] = 1
            else:
                acc[key] += 1
        return Spectrum(tuple(sorted((v, m) for v, m in acc.items() if m > 0)))

    def isclose(self, other: "Spectrum", tol=DEFAULT_CLUSTER_TOL) -> bool:
        if self.multiplicities != other.multiplicities:
            return False
        return all(abs(a - b) <= tol for a, b in zip(self.values, other.values))

    def to_json(self) -> str:
        return json.dumps([[v, m] for v, m in self.entries])

    @classmethod
    def from_json(cls, text: str) -> "Spectrum":
        return cls.from_pairs((v, m) for v, m in json.loads(text))

    def __str__(self):
        parts = [f"{v:g}" if m == 1 else f"{v:g}^{m}" for v, m in self.entries]
        return "{" + ", ".join(parts) + "}"


def _match(acc, lam, tol):
    best = None
    for v in acc:
        if abs(v - lam) <= tol and (best is None or abs(v - lam) < abs(best - lam)):
            best = v
    return best


def _cluster(sorted_vals: np.ndarray, tol: float) -> Spectrum:
    if sorted_vals.size == 0:
        return Spectrum(())
    groups = [[sorted_vals[0]]]
    for x in sorted_vals[1:]:
        if x - groups[-1][-1] <= tol:
            groups[-1].append(x)
        else:
            groups.append([x])
    ambiguous = any(b[0] - a[-1] < 10 * tol for a, b in zip(groups, groups[1:]))
    return Spectrum(tuple((float(np.mean(g)), len(g)) for g in groups), ambiguous)


def parse_spectrum(text: str) -> Spectrum:
    """Parse the ``"v:mult,v,..."`` syntax (``mult`` defaults to 1)."""
    pairs = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if ":" in tok:
            v, m = tok.rsplit(":", 1)
            pairs.append((float(v), int(m)))
        else:
            pairs.append((float(tok), 1))
    return Spectrum.from_pairs(pairs)


# -- multiplicity lists ----------------------------------------------------


def q_of_list(m: Sequence[int]) -> int:
    """Number of strictly positive entries."""
    return sum(1 for x in m if x > 0)


def _check_list(m):
    m = tuple(int(x) for x in m)
    if any(x < 0 for x in m):
        raise ValueError("multiplicity lists hold nonnegative integers")
    return m


def gap_multiplicity(m: Sequence[int], a: int, b: int) -> int:
    """Total multiplicity strictly between 1-based indices ``a`` and ``b``."""
    m = _check_list(m)
    k = len(m)
    if not 1 <= a <= b <= k:
        raise IndexError(f"need 1 <= a <= b <= {k}, got a={a}, b={b}")
    return sum(m[a : b - 1])


@dataclass(frozen=True)
class GapPartition:
    """Breakpoints ``1 = p_1 <= ... <= p_t = k`` (1-based)."""

    p: tuple[int, ...]

    def __post_init__(self):
        p = tuple(int(x) for x in self.p)
        if len(p) < 2 or p[0] != 1 or any(a > b for a, b in zip(p, p[1:])):
            raise ValueError(f"invalid gap partition {p}")
        object.__setattr__(self, "p", p)

    @property
    def t(self) -> int:
        return len(self.p)

    @property
    def k(self) -> int:
        return self.p[-1]

    def max_gap(self, m) -> int:
        return max(gap_multiplicity(m, a, b) for a, b in zip(self.p, self.p[1:]))


def _prefix(m):
    out = [0]
    for x in m:
        out.append(out[-1] + x)
    return out


def _breakpoints_needed(m, budget):
    """Fewest breakpoints (including both ends) covering 1..k with gaps <= budget."""
    k = len(m)
    pre = _prefix(m)
    count, p = 1, 1
    while p < k:
        # farthest j with gap(p, j) = pre[j-1] - pre[p] <= budget
        j = p + 1
        while j < k and pre[j] - pre[p] <= budget:
            j += 1
        p = j
        count += 1
    return count


def c_feasible(m: Sequence[int], t: int, budget: int) -> bool:
    """Greedy sweep: can ``t`` breakpoints keep every gap at most ``budget``?"""
    return _breakpoints_needed(_check_list(m), budget) <= t


def c_of(m: Sequence[int], t: int) -> tuple[int, GapPartition]:
    """Minimum over gap partitions of the maximum gap multiplicity.

    Binary search on the answer with :func:`c_feasible`. The returned witness
    is the lexicographically smallest partition attaining the optimum.
    """
    m = _check_list(m)
    k = len(m)
    if t < 2:
        raise ValueError(f"t must be at least 2, got {t}")
    if k < 2:
        raise ValueError("multiplicity list must have at least 2 entries")
    lo, hi = 0, sum(m)
    while lo < hi:
        mid = (lo + hi) // 2
        if c_feasible(m, t, mid):
            hi = mid
        else:
            lo = mid + 1
    return lo, _lex_smallest_witness(m, t, lo)


def _lex_smallest_witness(m, t, budget):
    k = len(m)
    pre = _prefix(m)

    def gap(a, b):  # 1-based, a <= b
        return pre[b - 1] - pre[a] if b > a else 0

    # need[j]: fewest further breakpoints after j to reach k
    need = [math.inf] * (k + 1)
    need[k] = 0
    for j in range(k - 1, 0, -1):
        need[j] = 1 + min(need[jj] for jj in range(j + 1, k + 1) if gap(j, jj) <= budget)
    p = [1]
    for i in range(1, t):
        remaining = t - 1 - i
        cur = p[-1]
        for cand in range(cur, k + 1):
            if gap(cur, cand) <= budget and need[cand] <= remaining:
                p.append(cand)
                break
        else:  # pragma: no cover - budget is feasible by construction
            raise AssertionError("no witness at the optimal budget")
    return GapPartition(tuple(p))


def c_of_dp(m: Sequence[int], t: int) -> int:
    """O(k^2 t) dynamic program for the same quantity as :func:`c_of`."""
    m = _check_list(m)
    k = len(m)
    if t < 2 or k < 2:
        raise ValueError("need t >= 2 and k >= 2")
    pre = _prefix(m)
    inf = math.inf
    # best[j]: optimum over partitions of 1..j whose last breakpoint is j
    best = [inf] * (k + 1)
    best[1] = 0
    for _ in range(t - 1):
        nxt = [inf] * (k + 1)
        for j in range(1, k + 1):
            for i in range(1, j + 1):
                if best[i] < inf:
                    g = pre[j - 1] - pre[i] if j > i else 0
                    nxt[j] = min(nxt[j], max(best[i], g))
        best = nxt
    return int(best[k])


def c_of_bruteforce(m: Sequence[int], t: int) -> int:
    """Exhaustive enumeration over all nondecreasing breakpoint tuples."""
    m = _check_list(m)
    k = len(m)
    best = None
    for mid in combinations_with_replacement(range(1, k + 1), t - 2):
        p = (1,) + mid + (k,)
        val = max(gap_multiplicity(m, a, b) for a, b in zip(p, p[1:]))
        best = val if best is None else min(best, val)
    return best


# -- interlacing -----------------------------------------------------------


def count_in_open_interval(s: Spectrum, alpha: float, beta: float) -> int:
    """Total multiplicity of eigenvalues in the open interval ``(alpha, beta)``."""
    if not alpha < beta:
        raise ValueError(f"need alpha < beta, got ({alpha}, {beta})")
    return sum(m for v, m in s.entries if alpha < v < beta)


def strictly_interlaces(N: Sequence[float], R0: Sequence[float]) -> bool:
    """``N_1 < R0_1 < N_2 < ... < R0_k < N_{k+1}`` for sorted inputs."""
    if len(N) != len(R0) + 1:
        raise ValueError(f"|N| must be |R0|+1, got {len(N)} and {len(R0)}")
    merged = [N[0]]
    for r, n in zip(R0, N[1:]):
        merged += [r, n]
    return all(a < b for a, b in zip(merged, merged[1:]))


def interval_interlacing_bound_holds(
    sA: Spectrum, sM: Spectrum, r: int, tol: float = DEFAULT_CLUSTER_TOL
) -> bool:
    """``|m_A(a,b) - m_M(a,b)| <= r`` for every open interval ``(a,b)``.

    Values of the two spectra within ``tol`` of each other are identified.
    Counts only change at eigenvalues, so it suffices to test every
    contiguous run of the merged value clusters.
    """
    pooled = sorted([(v, m, 0) for v, m in sA.entries] + [(v, m, 1) for v, m in sM.entries])
    cnt: list[list[int]] = []
    last = None
    for v, m, which in pooled:
        if last is None or v - last > tol:
            cnt.append([0, 0])
        cnt[-1][which] += m
        last = v
    diff = [a - b for a, b in cnt]
    pre = _prefix(diff)
    p = len(diff)
    return all(abs(pre[j + 1] - pre[i]) <= r for i in range(p) for j in range(i, p))


# -- dense symmetric matrices ----------------------------------------------


def as_symmetric(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if A.size and np.max(np.abs(A - A.T)) > SYMMETRY_RTOL * scale:
        raise ValueError("matrix is not symmetric")
    return A


def eigendecompose(A) -> tuple[np.ndarray, np.ndarray]:
    """Sorted eigenvalues and orthonormal eigenvectors (columns) of symmetric ``A``."""
    A = as_symmetric(A)
    w, V = np.linalg.eigh((A + A.T) / 2)
    return w, V


def spectrum_of(A, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> Spectrum:
    """Eigenvalues of ``A`` grouped by single-linkage clustering at ``cluster_tol``."""
    if cluster_tol <= 0:
        raise ValueError("cluster_tol must be positive")
    w, _ = eigendecompose(A)
    return _cluster(w, cluster_tol)
