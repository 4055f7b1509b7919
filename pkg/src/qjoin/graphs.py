"""Simple graphs with fixed vertex labelings, joins and pattern extraction.

Vertices are ``1..n``. Constructions compose deterministically: ``join(G, H)``
keeps G's labels and shifts H's by ``|G|``; ``jdup(G, v)`` appends the
duplicate as vertex ``n+1``. Pattern comparisons are exact label-for-label,
never up to isomorphism.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

DEFAULT_ZERO_TOL = 1e-10


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = set()
        for e in self.edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge {{{i},{j}}} outside 1..{self.n}")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self, v: int) -> set[int]:
        self._check_vertex(v)
        return {j if i == v else i for i, j in self.edges if v in (i, j)}

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def _check_vertex(self, v):
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} outside 1..{self.n}")

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for i, j in self.edges:
            A[i - 1, j - 1] = A[j - 1, i - 1] = 1.0
        return A

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen, stack = {1}, [1]
        while stack:
            v = stack.pop()
            for w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Subgraph on ``vertices``, relabeled ``1..len`` in the given order."""
        vs = list(vertices)
        index = {v: i + 1 for i, v in enumerate(vs)}
        return Graph.from_edges(
            len(vs), [(index[i], index[j]) for i, j in self.edges if i in index and j in index]
        )

    def to_text(self) -> str:
        lines = [f"{self.n} {self.num_edges}"]
        lines += [f"{i} {j}" for i, j in sorted(self.edges)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        n, e = int(rows[0][0]), int(rows[0][1])
        if len(rows) - 1 != e:
            raise ValueError(f"header promises {e} edges, file has {len(rows) - 1}")
        return cls.from_edges(n, [(int(a), int(b)) for a, b in rows[1:]])


# -- families --------------------------------------------------------------


def empty_graph(n: int) -> Graph:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return Graph(n, frozenset())


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph.from_edges(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def star(n: int) -> Graph:
    """``K_1 v E_{n-1}``; the centre is vertex 1."""
    if n < 1:
        raise ValueError("star needs n >= 1")
    return Graph.from_edges(n, [(1, j) for j in range(2, n + 1)])


def hypercube(t: int) -> Graph:
    """``Q_t``: vertex ``i`` is the binary string of ``i-1``.

    The top bit splits ``Q_t`` into two copies of ``Q_{t-1}`` matched by
    ``i <-> i + 2^(t-1)``.
    """
    if t < 1:
        raise ValueError("hypercube needs t >= 1")
    size = 1 << t
    return Graph.from_edges(
        size, [(x + 1, (x ^ (1 << b)) + 1) for x in range(size) for b in range(t) if x < x ^ (1 << b)]
    )


def join(G: Graph, H: Graph) -> Graph:
    off = G.n
    edges = set(G.edges)
    edges |= {(i + off, j + off) for i, j in H.edges}
    edges |= {(i, off + j) for i in range(1, G.n + 1) for j in range(1, H.n + 1)}
    return Graph(G.n + H.n, frozenset(edges))


def jdup(G: Graph, v: int) -> Graph:
    """Duplicate ``v`` as vertex ``n+1``, adjacent to ``v`` and to ``N(v)``."""
    G._check_vertex(v)
    w = G.n + 1
    new = {(v, w)} | {(u, w) for u in G.neighbors(v)}
    return Graph(w, G.edges | frozenset(new))


_FAMILIES = {"P": path, "C": cycle, "K": complete, "E": empty_graph, "Q": hypercube, "S": star}


def parse_graph(spec: str) -> Graph:
    """Parse ``"P5"``, ``"C10"``, ``"Q4"``, ... and joins such as ``"K2+C6"``.

    ``+`` is left-associative: ``"A+B+C"`` is ``join(join(A, B), C)``.
    """
    parts = [s.strip() for s in spec.split("+")]
    graphs = []
    for part in parts:
        m = re.fullmatch(r"([PCKEQS])(\d+)", part)
        if not m:
            raise ValueError(f"cannot parse graph specifier {part!r}")
        graphs.append(_FAMILIES[m.group(1)](int(m.group(2))))
    out = graphs[0]
    for g in graphs[1:]:
        out = join(out, g)
    return out


# -- patterns --------------------------------------------------------------


@dataclass(frozen=True)
class PatternReport:
    graph: Graph
    min_edge_magnitude: float
    max_nonedge_magnitude: float

    def margin(self) -> float:
        """Gap between the smallest edge entry and the largest non-edge entry."""
        return self.min_edge_magnitude - self.max_nonedge_magnitude


def pattern_of(A, zero_tol: float = DEFAULT_ZERO_TOL) -> PatternReport:
    """Graph of the off-diagonal entries of ``A`` with ``|a_ij| > zero_tol``."""
    if zero_tol < 0:
        raise ValueError("zero_tol must be nonnegative")
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    iu, ju = np.triu_indices(n, 1)
    mags = np.maximum(np.abs(A[iu, ju]), np.abs(A[ju, iu]))
    on = mags > zero_tol
    graph = Graph.from_edges(n, [(i + 1, j + 1) for i, j in zip(iu[on], ju[on])])
    min_edge = float(mags[on].min()) if on.any() else math.inf
    max_non = float(mags[~on].max()) if (~on).any() else 0.0
    return PatternReport(graph, min_edge, max_non)


def respects_pattern(A, G: Graph, zero_tol: float = DEFAULT_ZERO_TOL) -> bool:
    A = np.asarray(A, dtype=float)
    if A.shape != (G.n, G.n):
        raise ValueError(f"matrix is {A.shape}, graph has {G.n} vertices")
    return pattern_of(A, zero_tol).graph == G
