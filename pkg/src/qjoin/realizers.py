"""Matrices in S(G) with prescribed spectra.

Concrete families (paths, hypercubes) are built directly. Everything else
goes through :func:`iep_solve`, a seeded heuristic: alternating projections
between the isospectral set and the pattern set, followed by a Newton
correction on the free entries (diagonal and edges) that enforces the
prescribed eigenvalues block by block, multiplicities included.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qjoin.errors import NonConvergence
from qjoin.graphs import Graph, path, respects_pattern
from qjoin.rng import make_rng, random_orthogonal
from qjoin.spectral import Spectrum

# working floors tried in rotation across restarts, relative to the spectral spread
_WORKING_FLOORS = (0.2, 0.1, 0.3, 0.05)
_AP_ITERATIONS = 300
_NEWTON_ITERATIONS = 60
_POLISH_STEPS = 2


@dataclass(frozen=True)
class IepOptions:
    max_iterations: int = 5000
    residual_tol: float = 1e-9
    edge_floor: float = 1e-3
    restarts: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.residual_tol <= 0:
            raise ValueError("residual_tol must be positive")
        if self.edge_floor <= 0:
            raise ValueError("edge_floor must be positive")
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be positive")

    def with_seed(self, seed: int) -> "IepOptions":
        return IepOptions(self.max_iterations, self.residual_tol, self.edge_floor, self.restarts, seed)


def jacobi_from_spectrum(lambdas, seed: int = 0) -> np.ndarray:
    """Unreduced symmetric tridiagonal matrix (in S(P_n)) with spectrum ``lambdas``.

    Lanczos with full reorthogonalization on ``diag(lambdas)`` started from a
    seeded nowhere-zero unit vector.
    """
    lam = np.asarray(lambdas, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise ValueError("need at least one eigenvalue")
    if np.any(np.diff(lam) <= 0):
        raise ValueError("eigenvalues must be strictly increasing (paths have simple spectra)")
    n = lam.size
    rng = make_rng(seed)
    q = rng.uniform(0.5, 1.5, n) * rng.choice([-1.0, 1.0], n)
    q /= np.linalg.norm(q)
    Q = np.zeros((n, n))
    alpha = np.zeros(n)
    beta = np.zeros(max(n - 1, 0))
    Q[:, 0] = q
    for j in range(n):
        w = lam * Q[:, j]
        alpha[j] = Q[:, j] @ w
        if j == n - 1:
            break
        w -= Q[:, : j + 1] @ (Q[:, : j + 1].T @ w)
        w -= Q[:, : j + 1] @ (Q[:, : j + 1].T @ w)
        beta[j] = np.linalg.norm(w)
        if beta[j] <= 1e-12 * max(1.0, np.abs(lam).max()):
            raise NonConvergence("Lanczos breakdown; starting vector not generic")
        Q[:, j + 1] = w / beta[j]
    return np.diag(alpha) + np.diag(beta, 1) + np.diag(beta, -1)


def hypercube_realizer(t: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Involution ``B`` in S(Q_t) and its nowhere-zero eigenvector for eigenvalue 1.

    ``B_t = [[a B_{t-1}, b I], [b I, -a B_{t-1}]]`` with ``b = sqrt(1 - a^2)`` and
    ``B_0 = [1]``. The eigenvector is ``((I + a B_{t-1}) 1, b 1)``.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    beta = np.sqrt(1.0 - alpha * alpha)
    prev = np.ones((1, 1))
    for _ in range(t):
        eye = np.eye(prev.shape[0])
        cur = np.block([[alpha * prev, beta * eye], [beta * eye, -alpha * prev]])
        last, prev = prev, cur
    ones = np.ones(last.shape[0])
    v = np.concatenate([ones + alpha * (last @ ones), beta * ones])
    if np.min(np.abs(v)) <= 1e-7:
        raise ValueError(f"alpha={alpha} too large: eigenvector has a zero entry")
    return prev, v


def cycle_spectrum_valid(lambdas, tol: float = 0.0) -> bool:
    """Whether nonincreasing ``lambdas`` can be the spectrum of a matrix in S(C_n).

    Consecutive relations must alternate ``>= , >`` starting either way.
    Values within ``tol`` count as equal.
    """
    lam = list(lambdas)
    if len(lam) < 3:
        raise ValueError("cycles have at least 3 vertices")
    if any(a < b - tol for a, b in zip(lam, lam[1:])):
        raise ValueError("eigenvalues must be listed nonincreasing")
    strict = [a - b > tol for a, b in zip(lam, lam[1:])]
    first = all(s for s in strict[1::2])  # >=, >, >=, >, ...
    second = all(s for s in strict[0::2])  # >, >=, >, >=, ...
    return first or second


def _blocks(target):
    blocks, i, n = [], 0, len(target)
    while i < n:
        j = i
        while j + 1 < n and target[j + 1] == target[i]:
            j += 1
        blocks.append(np.arange(i, j + 1))
        i = j + 1
    return blocks


def _attempt(G, target, rng, working_floor, opts):
    """One restart. Returns ``(X, residual, min_edge)``; X has G's exact pattern."""
    n = G.n
    spread = target[-1] - target[0]
    if spread <= 0:
        spread = max(1.0, abs(target[0]))
    edges = sorted(G.edges)
    I = np.array([i - 1 for i, _ in edges], dtype=int)
    L = np.array([j - 1 for _, j in edges], dtype=int)
    nonedge = np.ones((n, n), dtype=bool)
    nonedge[I, L] = nonedge[L, I] = False
    np.fill_diagonal(nonedge, False)
    # per-edge floors, so the warm start does not favour symmetric solutions
    wfloor = working_floor * spread * rng.uniform(0.5, 1.5, len(edges))
    tau = max(opts.edge_floor, 0.01 * spread)

    def to_pattern(X):
        X[nonedge] = 0.0
        e = X[I, L]
        small = np.abs(e) < wfloor
        e[small] = np.where(e[small] >= 0, wfloor[small], -wfloor[small])
        X[I, L] = X[L, I] = e

    Q = random_orthogonal(n, rng)
    X = (Q * target) @ Q.T
    ap_iters = min(_AP_ITERATIONS, opts.max_iterations)
    for _ in range(ap_iters):
        to_pattern(X)
        w, V = np.linalg.eigh(X)
        if np.max(np.abs(w - target)) < opts.residual_tol:
            break
        X = (V * target) @ V.T
    to_pattern(X)

    blocks = _blocks(target)
    pairs = [(b[a], b[c]) for b in blocks for a in range(len(b)) for c in range(a, len(b))]
    pi = np.array([p for p, _ in pairs], dtype=int)
    pj = np.array([q for _, q in pairs], dtype=int)
    free = np.ones(len(edges), dtype=bool)
    diag = np.arange(n)
    residual = np.inf
    polish, accepted = _POLISH_STEPS, None
    for _ in range(min(_NEWTON_ITERATIONS, opts.max_iterations)):
        w, V = np.linalg.eigh(X)
        residual = float(np.max(np.abs(w - target)))
        if residual < opts.residual_tol:
            # a few extra quadratic steps drive repeated eigenvalues to machine precision
            if accepted is None or residual < accepted[1]:
                accepted = (X.copy(), residual)
            if polish == 0 or residual < 1e-14 * spread:
                break
            polish -= 1
        Vi, Vj = V[:, pi], V[:, pj]
        If, Lf = I[free], L[free]
        J = np.hstack([(Vi * Vj).T, (Vi[If] * Vj[Lf] + Vi[Lf] * Vj[If]).T])
        rhs = np.where(pi == pj, target[pi] - w[pi], 0.0)
        dx = np.linalg.lstsq(J, rhs, rcond=None)[0]
        X[diag, diag] += dx[:n]
        old = X[If, Lf]
        new = old + dx[n:]
        # freeze edges that would shrink below tau or change sign
        hit = (np.sign(new) != np.sign(old)) | (np.abs(new) < tau)
        new[hit] = np.sign(old[hit]) * tau
        X[If, Lf] = X[Lf, If] = new
        free[np.flatnonzero(free)[hit]] = False
    else:
        w = np.linalg.eigvalsh(X)
        residual = float(np.max(np.abs(w - target)))
    if accepted is not None and not residual <= accepted[1]:
        X, residual = accepted
    min_edge = float(np.min(np.abs(X[I, L]))) if len(edges) else np.inf
    return X, residual, min_edge


def iep_solve(G: Graph, target: Spectrum, opts: IepOptions = IepOptions()) -> np.ndarray:
    """A matrix in S(G) whose sorted eigenvalues match ``target`` within ``residual_tol``.

    Raises :class:`NonConvergence` after ``opts.restarts`` failed restarts; that
    is not evidence that the spectrum is unrealizable.
    """
    if target.dimension != G.n:
        raise ValueError(f"spectrum has {target.dimension} eigenvalues, graph has {G.n} vertices")
    lam = target.eigenvalues()
    if G.n == 1:
        return np.array([[lam[0]]])
    best = (np.inf, 0.0)
    for restart in range(opts.restarts):
        rng = make_rng(opts.seed, restart)
        floor = _WORKING_FLOORS[restart % len(_WORKING_FLOORS)]
        X, residual, min_edge = _attempt(G, lam, rng, floor, opts)
        if residual < opts.residual_tol and min_edge >= opts.edge_floor:
            X = (X + X.T) / 2
            if respects_pattern(X, G, opts.edge_floor / 2):
                return X
        if (residual, -min_edge) < (best[0], -best[1]):
            best = (residual, min_edge)
    raise NonConvergence(
        f"no matrix in S(G) with the target spectrum after {opts.restarts} restarts "
        f"(best residual {best[0]:.3g}, best edge margin {best[1]:.3g})",
        best_residual=best[0],
        best_margin=best[1],
    )


def c6_integer_matrix() -> np.ndarray:
    """The 6x6 integer matrix in S(C_6) with spectrum {(-2)^2, -1, 1, 2^2}."""
    return np.array(
        [
            [1, 1, 0, 0, 0, -1],
            [1, -1, 1, 0, 0, 0],
            [0, 1, 1, 1, 0, 0],
            [0, 0, 1, -1, 1, 0],
            [0, 0, 0, 1, 1, 1],
            [-1, 0, 0, 0, 1, -1],
        ],
        dtype=float,
    )


def c6_integer_basis() -> np.ndarray:
    """Orthonormal eigenvectors of :func:`c6_integer_matrix` for eigenvalues 1 and -1."""
    return np.array([[1, 0], [0, 1], [-1, 0], [0, -1], [1, 0], [0, 1]], dtype=float) / np.sqrt(3.0)


# fmt: off
_C10_UPPER = {
    (1, 2): -1.9720, (1, 3): -0.11321, (1, 4): -0.40399, (1, 5): -2.4521, (1, 6): -1.3819,
    (1, 7): 0.0061884, (1, 8): 0.00028437, (1, 9): -0.0036489, (1, 10): 2.1264,
    (1, 11): -2.9646, (1, 12): 1.3043,
    (2, 3): -2.2195, (2, 4): -2.0495, (2, 5): 2.2752, (2, 6): -0.83772, (2, 7): 0.0080390,
    (2, 8): 0.005574, (2, 9): -0.018511, (2, 10): -1.9731, (2, 11): -1.7971, (2, 12): 1.6944,
    (3, 4): 3.2468, (3, 12): 3.6901, (4, 5): 3.6175, (5, 6): 1.5399, (6, 7): 0.010306,
    (7, 8): 5.4891, (8, 9): 2.4227, (9, 10): 0.013409, (10, 11): 2.9999, (11, 12): -2.7171,
}
# fmt: on


def k2_c10_matrix() -> np.ndarray:
    """The printed 12x12 matrix in S(K_2 v C_10), digits exactly as printed.

    Its spectrum is {(-6)^4, 0^4, 6^4} up to the printing truncation; compare
    at tolerance 5e-3.
    """
    A = np.zeros((12, 12))
    for (i, j), v in _C10_UPPER.items():
        A[i - 1, j - 1] = A[j - 1, i - 1] = v
    return A
