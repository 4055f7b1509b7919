"""Matrices on joins ``G v H`` with few distinct eigenvalues."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from qjoin.bordering import NOWHERE_ZERO_THRESHOLD, boley_golub, border_with_vectors
from qjoin.errors import NowhereZeroFailure
from qjoin.graphs import Graph, complete, cycle, join, pattern_of, respects_pattern
from qjoin.realizers import IepOptions, iep_solve, c6_integer_basis, c6_integer_matrix
from qjoin.rng import make_rng, random_orthogonal
from qjoin.spectral import DEFAULT_CLUSTER_TOL, Spectrum, as_symmetric, eigendecompose, spectrum_of

log = logging.getLogger(__name__)

DEFAULT_RETRY_BUDGET = 16
_DISTINCT_GAP = 1e-3  # minimum separation between mus and between the a_i


@dataclass(frozen=True)
class JoinDesign:
    """Eigenvalue bookkeeping for a matrix on ``G v H`` with ``|G| = n``, ``|H| = m``.

    Vertex ``i`` of G carries an arrow block with corner ``a[i]`` and
    diagonal ``mus[i]`` whose spectrum is ``lambdas[:k_i[i]+1]``; the last
    ``k_prime`` eigenvalues of H's diagonal are ``lambdas[:k_prime]``.
    """

    n: int
    m: int
    k: int
    lambdas: tuple[float, ...]
    k_i: tuple[int, ...]
    k_prime: int
    mus: tuple[tuple[float, ...], ...]
    a: tuple[float, ...]

    def __post_init__(self):
        lam = self.lambdas
        if len(lam) != self.k + 1 or any(x >= y for x, y in zip(lam, lam[1:])):
            raise ValueError("lambdas must be k+1 strictly increasing values")
        if len(self.k_i) != self.n or any(not 1 <= ki <= self.k for ki in self.k_i):
            raise ValueError("need n values k_i in [1, k]")
        if self.k_prime != self.m - sum(self.k_i) or not 0 <= self.k_prime <= self.k + 1:
            raise ValueError("k_prime must equal m - sum(k_i) and lie in [0, k+1]")
        flat = []
        for ki, mu, ai in zip(self.k_i, self.mus, self.a):
            if len(mu) != ki:
                raise ValueError("mus[i] must have k_i entries")
            for j, x in enumerate(mu):
                if not lam[j] < x < lam[j + 1]:
                    raise ValueError(f"mu {x} is not strictly between {lam[j]} and {lam[j + 1]}")
            if abs(ai - (sum(lam[: ki + 1]) - sum(mu))) > 1e-9 * (1 + abs(ai)):
                raise ValueError("a_i must equal sum(lambda_1..lambda_{k_i+1}) - sum(mus[i])")
            flat.extend(mu)
        if len(set(flat)) != len(flat):
            raise ValueError("mus must be globally distinct")
        if len(set(self.a)) != len(self.a):
            raise ValueError("a must be distinct")

    def h_diagonal(self) -> np.ndarray:
        """Diagonal of ``D_mu (+) Lambda``: H's target eigenvalues, in block order."""
        return np.array([x for mu in self.mus for x in mu] + list(self.lambdas[: self.k_prime]))

    def arrow_vectors(self) -> list[np.ndarray]:
        return [boley_golub(mu, self.lambdas[: ki + 1])[1] for ki, mu in zip(self.k_i, self.mus)]

    def expected_trace(self) -> float:
        return float(sum(self.a) + sum(sum(mu) for mu in self.mus) + sum(self.lambdas[: self.k_prime]))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "lambdas": list(self.lambdas),
            "k_i": list(self.k_i),
            "k_prime": self.k_prime,
            "mus": [list(mu) for mu in self.mus],
            "a": list(self.a),
        }


def design_join_spectrum(n: int, m: int, k: int, seed: int = 0, lambdas=None) -> JoinDesign:
    """A valid :class:`JoinDesign` with ``lambdas = (1, ..., k+1)`` unless given."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not 1 <= n <= m <= k * n + k + 1:
        raise ValueError(f"need 1 <= n <= m <= k*n + k + 1 = {k * n + k + 1}; got n={n}, m={m}")
    lam = tuple(float(x) for x in (lambdas if lambdas is not None else range(1, k + 2)))
    if len(lam) != k + 1:
        raise ValueError("need k+1 lambdas")
    k_i, used = [], 0
    for i in range(n):
        ki = min(k, m - used - (n - 1 - i))
        k_i.append(ki)
        used += ki
    rng = make_rng(seed, 0xD1)
    for _ in range(1000):
        mus, taken = [], []
        for ki in k_i:
            mu = []
            for j in range(ki):
                width = lam[j + 1] - lam[j]
                mu.append(lam[j] + width * (0.5 + rng.uniform(-0.35, 0.35)))
            mus.append(tuple(mu))
            taken.extend(mu)
        a = [sum(lam[: ki + 1]) - sum(mu) for ki, mu in zip(k_i, mus)]
        if _separated(taken) and _separated(a):
            return JoinDesign(n, m, k, lam, tuple(k_i), m - sum(k_i), tuple(mus), tuple(a))
    raise RuntimeError("could not separate the mus and a_i; widen the lambdas")


def _separated(xs) -> bool:
    s = np.sort(np.asarray(xs, dtype=float))
    return bool(np.all(np.diff(s) > _DISTINCT_GAP))


def _ordered_eigvecs(X, targets):
    """Eigenvectors of ``X`` reordered to follow ``targets`` (all distinct)."""
    w, Q = eigendecompose(X)
    order = np.argsort(targets, kind="stable")
    V = np.empty_like(Q)
    V[:, order] = Q
    return V


@dataclass(frozen=True, eq=False)
class JoinAssembly:
    matrix: np.ndarray
    design: JoinDesign
    attempts: int
    min_cross_entry: float
    failures: tuple[str, ...] = field(default=())


def assemble_join(
    design: JoinDesign, G: Graph, H: Graph, opts: IepOptions = IepOptions(), budget: int = DEFAULT_RETRY_BUDGET
) -> JoinAssembly:
    """Build a matrix in ``S(G v H)`` whose eigenvalues all lie in ``design.lambdas``.

    G's block realizes ``diag(a)`` and H's block realizes ``D_mu (+) Lambda``;
    the cross block ``U Y^T V^T`` must be nowhere zero, otherwise both blocks
    are re-solved with fresh seeds.
    """
    if G.n != design.n or H.n != design.m:
        raise ValueError(f"design is for |G|={design.n}, |H|={design.m}; got {G.n}, {H.n}")
    if not (G.is_connected() and H.is_connected()):
        raise ValueError("both graphs must be connected")
    a = np.array(design.a)
    hdiag = design.h_diagonal()
    Y = np.zeros((design.m, design.n))
    row = 0
    for i, b in enumerate(design.arrow_vectors()):
        Y[row : row + len(b), i] = b
        row += len(b)
    failures, best = [], 0.0
    for attempt in range(budget):
        XG = iep_solve(G, Spectrum.from_pairs((x, 1) for x in a), opts.with_seed(_sub(opts.seed, attempt, 1)))
        XH = iep_solve(H, Spectrum.from_pairs((x, 1) for x in hdiag), opts.with_seed(_sub(opts.seed, attempt, 2)))
        U = _ordered_eigvecs(XG, a)
        V = _ordered_eigvecs(XH, hdiag)
        VY = V @ Y
        cross = U @ VY.T
        small = min(float(np.min(np.abs(VY))), float(np.min(np.abs(cross))))
        best = max(best, small)
        if small <= NOWHERE_ZERO_THRESHOLD:
            msg = f"attempt {attempt}: smallest cross entry {small:.3g}"
            log.info(msg)
            failures.append(msg)
            continue
        X = np.block([[XG, cross], [cross.T, XH]])
        return JoinAssembly(X, design, attempt + 1, small, tuple(failures))
    raise NowhereZeroFailure(
        f"cross block had a zero entry in all {budget} attempts (best {best:.3g})",
        best_min_abs=best,
        attempts=budget,
    )


def assemble_join_matrix(
    design: JoinDesign, G: Graph, H: Graph, opts: IepOptions = IepOptions(), budget: int = DEFAULT_RETRY_BUDGET
) -> np.ndarray:
    return assemble_join(design, G, H, opts, budget).matrix


def _sub(seed, *keys) -> int:
    return int(make_rng(seed, *keys).integers(2**62))


# -- K2 joins ------------------------------------------------------------------


def _k2_shape(s: Spectrum, beta, gamma, mus, tol):
    """Split ``s`` into the lambdas, checking the required interleaving."""
    t = len(mus) + 2
    expected_len = 2 * t  # lambda_1, beta, gamma, lambda_2, mu_2, lambda_3, ..., mu_{t-1}, lambda_t
    if s.q != expected_len:
        raise ValueError(f"spectrum has {s.q} distinct values; shape needs {expected_len}")
    vals, mult = s.values, s.multiplicities

    def same(x, y):
        return abs(x - y) <= tol * max(1.0, abs(y))

    if not (same(vals[1], beta) and same(vals[2], gamma) and mult[1] == 1 and mult[2] == 1):
        raise ValueError("beta and gamma must be simple eigenvalues right after lambda_1")
    lambdas = [(vals[0], mult[0]), (vals[3], mult[3])]
    for i, mu in enumerate(mus):
        v, mm = vals[4 + 2 * i], mult[4 + 2 * i]
        if not same(v, mu) or mm != 2:
            raise ValueError(f"expected mu={mu} with multiplicity 2, found {v} with {mm}")
        lambdas.append((vals[5 + 2 * i], mult[5 + 2 * i]))
    return lambdas


def k2_join_construction(
    A,
    beta: float,
    gamma: float,
    mus,
    seed: int = 0,
    budget: int = DEFAULT_RETRY_BUDGET,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    coverage_tol: float = 1e-8,
) -> np.ndarray:
    """Two-row bordering of ``A`` in ``S(K2 v G(A))`` adding two copies of every lambda.

    ``A`` must have spectrum ``lambda_1^(m_1) < beta < gamma < lambda_2^(m_2)
    < mu_2^(2) < lambda_3^(m_3) < ... < mu_{t-1}^(2) < lambda_t^(m_t)`` and
    every vertex must be seen by some eigenvector of some ``mu_i``.
    """
    A = as_symmetric(A)
    mus = [float(x) for x in mus]
    if not mus:
        raise ValueError("need at least one double eigenvalue mu (t >= 3); with none no vertex is covered")
    s = spectrum_of(A, cluster_tol)
    lam_pairs = _k2_shape(s, beta, gamma, mus, cluster_tol)
    lambdas = [v for v, _ in lam_pairs]
    w, Q = eigendecompose(A)

    def cols(value):
        idx = np.flatnonzero(np.abs(w - value) <= max(cluster_tol, 1e-9) * max(1.0, abs(value)) * 10)
        return Q[:, idx]

    v_beta, v_gamma = cols(beta), cols(gamma)
    mu_spaces = [cols(mu) for mu in mus]
    if v_beta.shape[1] != 1 or v_gamma.shape[1] != 1 or any(E.shape[1] != 2 for E in mu_spaces):
        raise ValueError("eigenspace dimensions do not match the required shape")
    coverage = np.sqrt(sum(np.sum(E**2, axis=1) for E in mu_spaces))
    if np.min(coverage) <= coverage_tol:
        u = int(np.argmin(coverage)) + 1
        raise ValueError(f"vertex {u} is zero on every mu eigenvector; coverage condition fails")

    d_beta = [beta] + mus
    d_gamma = [gamma] + mus
    kb, bvec = boley_golub(d_beta, lambdas)
    kc, cvec = boley_golub(d_gamma, lambdas)
    D1 = np.diag([kb, kc])
    # columns ordered beta, gamma, mu_2 (two), mu_3 (two), ...
    ncols = 2 + 2 * len(mus)
    B0 = np.zeros((2, ncols))
    B0[0, 0], B0[1, 1] = bvec[0], cvec[0]
    for i in range(len(mus)):
        B0[0, 2 + 2 * i] = bvec[1 + i]
        B0[1, 3 + 2 * i] = cvec[1 + i]
    target = Spectrum.from_pairs((v, m + 2) for v, m in lam_pairs)
    best = 0.0
    for attempt in range(budget):
        rng = make_rng(seed, attempt)
        blocks = [v_beta, v_gamma]
        for E in mu_spaces:
            th = rng.uniform(0.0, 2 * np.pi)
            R = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
            blocks.append(E @ R)
        Vp = np.hstack(blocks)
        U = random_orthogonal(2, rng)
        top = U @ D1 @ U.T
        cross = U @ B0 @ Vp.T
        small = min(abs(top[0, 1]), float(np.min(np.abs(cross))))
        best = max(best, small)
        if small <= NOWHERE_ZERO_THRESHOLD:
            log.info("k2 attempt %d: smallest new entry %.3g", attempt, small)
            continue
        B = np.block([[top, cross], [cross.T, A]])
        got = spectrum_of(B, max(cluster_tol, 1e-8))
        if not got.isclose(target, 1e-8 * max(1.0, max(abs(x) for x in lambdas))):
            raise RuntimeError(f"assembled spectrum {got} differs from {target}")
        return B
    raise NowhereZeroFailure(
        f"no rotation gave a nowhere-zero border in {budget} attempts (best {best:.3g})",
        best_min_abs=best,
        attempts=budget,
    )


def k2_join_graph(A, zero_tol: float = 1e-10) -> Graph:
    """``K2 v G(A)`` with the two new vertices labelled 1 and 2."""
    return join(complete(2), pattern_of(A, zero_tol).graph)


# -- worked K2 v C6 example ---------------------------------------------------


def _uv(t):
    if not -1 < t < 1:
        raise ValueError("t must lie in the open interval (-1, 1)")
    return np.sqrt((1 - t) / 2), np.sqrt((1 + t) / 2)


def worked_c6_closed_forms(t: float) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form ``A'`` (7x7) and ``A''`` (8x8) for the C6 example, entries in ``u, v``."""
    u, v = _uv(t)
    A = c6_integer_matrix()
    first = np.array([u, v, -u, -v, u, v])
    A1 = np.zeros((7, 7))
    A1[0, 0] = t
    A1[0, 1:] = A1[1:, 0] = first
    A1[1:, 1:] = A
    second = np.array([np.sqrt(1 - t * t), -v, u, v, -u, -v, u])
    A2 = np.zeros((8, 8))
    A2[0, 0] = -t
    A2[0, 1:] = A2[1:, 0] = second
    A2[1:, 1:] = A1
    return A1, A2


def worked_c6_pipeline(t: float) -> tuple[np.ndarray, np.ndarray]:
    """Run the two borderings on the 6x6 C6 matrix: remove {-1, 1} adding {-2, t, 2}, then remove t adding {-2, 2}."""
    _uv(t)
    A = c6_integer_matrix()
    U0 = c6_integer_basis()
    _, _, A1 = border_with_vectors(A, U0, [1.0, -1.0], [-2.0, t, 2.0])
    w, Q = eigendecompose(A1)
    i = int(np.argmin(np.abs(w - t)))
    x = Q[:, i] * np.sign(Q[0, i])
    _, _, A2 = border_with_vectors(A1, x[:, None], [w[i]], [-2.0, 2.0])
    return A1, A2


def worked_c6_checks(t: float) -> dict:
    A1, A2 = worked_c6_pipeline(t)
    C1, C2 = worked_c6_closed_forms(t)
    base = cycle(6)
    return {
        "t": t,
        "spectrum_A1": str(spectrum_of(A1)),
        "spectrum_A2": str(spectrum_of(A2)),
        "A1_in_K1_join_C6": respects_pattern(A1, join(complete(1), base)),
        "A2_in_K2_join_C6": respects_pattern(A2, join(complete(2), base)),
        "max_diff_A1": float(np.max(np.abs(A1 - C1))),
        "max_diff_A2": float(np.max(np.abs(A2 - C2))),
    }

