"""Known values and bounds for q(G), and a rule-based aggregator.

Every rule records a short provenance string. Nothing here is heuristic: a
rule either applies to the exact labelled graph (or one of its join splits)
or it is skipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

from qjoin.bordering import join_q_lower_bound
from qjoin.graphs import Graph, complete, cycle, empty_graph, hypercube, path, star
from qjoin.spectral import Spectrum


@dataclass(frozen=True)
class QBound:
    lower: Optional[int] = None
    upper: Optional[int] = None
    provenance: tuple[str, ...] = ()
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise ValueError(f"inconsistent bound: lower {self.lower} > upper {self.upper}")

    @property
    def exact(self) -> Optional[int]:
        return self.lower if self.lower is not None and self.lower == self.upper else None

    def tighten(self, lower=None, upper=None, rule: str = "") -> "QBound":
        lo, up = self.lower, self.upper
        changed = False
        if lower is not None and (lo is None or lower > lo):
            lo, changed = lower, True
        if upper is not None and (up is None or upper < up):
            up, changed = upper, True
        prov = self.provenance + ((rule,) if changed and rule and rule not in self.provenance else ())
        return QBound(lo, up, prov, self.notes)

    def with_note(self, note: str) -> "QBound":
        return QBound(self.lower, self.upper, self.provenance, self.notes + (note,))

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "provenance": list(self.provenance),
            "notes": list(self.notes),
        }


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def q_join_path(n: int, m: int) -> int:
    """q(G v P_m) for connected G on ``n <= m`` vertices, ``m > 1``."""
    if m <= 1 or not 1 <= n <= m:
        raise ValueError(f"need m > 1 and 1 <= n <= m, got n={n}, m={m}")
    return _ceil_div(n + m, n + 1)


def q_complete_join_path(n: int, m: int) -> int:
    """q(K_n v P_m) for ``n, m >= 2``; when ``n > m`` the value 2 comes from join duplication."""
    if n < 2 or m < 2:
        raise ValueError("need n, m >= 2")
    return _ceil_div(n + m, n + 1)


def q_upper_general_join(size_g: int, size_h: int) -> int:
    """Upper bound on q(G v H) for connected G, H, not both single vertices."""
    if size_g < 1 or size_h < 1:
        raise ValueError("graph sizes must be positive")
    if max(size_g, size_h) < 2:
        raise ValueError("bound needs max(|G|, |H|) >= 2")
    return _ceil_div(size_g + size_h, min(size_g, size_h) + 1)


def q_k1_even_cycle(k: int) -> int:
    """q(K_1 v C_{2k}) = k."""
    if k < 2:
        raise ValueError("k must be at least 2")
    return k


def k1_cycle_spectrum_necessary(s: Spectrum, k: int) -> bool:
    """Necessary condition for ``s`` to be the spectrum of a matrix in S(K_1 v C_{2k}).

    Multiplicities are at most 3, and any two triple eigenvalues have a
    simple eigenvalue strictly between them.
    """
    if s.dimension != 2 * k + 1:
        raise ValueError(f"spectrum has {s.dimension} eigenvalues, expected {2 * k + 1}")
    m = s.multiplicities
    if max(m) > 3:
        return False
    triples = [i for i, x in enumerate(m) if x == 3]
    return all(1 in m[a + 1 : b] for a, b in zip(triples, triples[1:]))


def hypercube_join_bound(s: int, t: int) -> QBound:
    """Bounds on q(K_s v Q_t)."""
    if s < 1 or t < 1:
        raise ValueError("s and t must be positive")
    b = QBound(2, None, ("graph has an edge: q >= 2",))
    b = b.tighten(upper=3, rule="nowhere-zero eigenvector of a two-eigenvalue hypercube realization: q(K_s v Q_t) <= 3")
    b = b.tighten(upper=q_upper_general_join(s, 2**t), rule="general join bound ceil((|G|+|H|)/(min+1))")
    if t % 2 == 0 and t >= 4 and s <= (t - 2) // 2:
        b = b.tighten(lower=3, rule=f"independent set of {(t - 2) // 2 + 1} cube vertices sharing only K_s: q >= 3")
    if b.exact is None:
        b = b.with_note("the least s with q(K_s v Q_t) = 2 is an open question; only the interval is reported")
    return b


def hypercube_witness_vertices(s: int, tp: int) -> list[int]:
    """Labels in ``join(K_s, Q_{2tp+2})`` of the cube vertices with ones in bits 2i-1, 2i (i = 1..tp+1)."""
    if tp < 1 or s < 0:
        raise ValueError("need tp >= 1 and s >= 0")
    width = 2 * tp + 2
    out = []
    for i in range(1, tp + 2):
        # string position p (1-based, left to right) is bit width - p
        x = (1 << (width - (2 * i - 1))) | (1 << (width - 2 * i))
        out.append(s + x + 1)
    return out


def independent_witness_q3(G: Graph, verts: Sequence[int]) -> bool:
    """True if ``verts`` certify q(G) >= 3.

    They must be pairwise nonadjacent, at least two, in a connected graph,
    with fewer vertices in the union of pairwise common neighbourhoods than
    there are in ``verts``.
    """
    vs = list(verts)
    if len(set(vs)) != len(vs):
        raise ValueError("vertices must be distinct")
    for v in vs:
        if not 1 <= v <= G.n:
            raise ValueError(f"vertex {v} outside 1..{G.n}")
    if len(vs) < 2 or not G.is_connected():
        return False
    if any(G.has_edge(a, b) for i, a in enumerate(vs) for b in vs[i + 1 :]):
        return False
    nbrs = {v: G.neighbors(v) for v in vs}
    common = set()
    for i, a in enumerate(vs):
        for b in vs[i + 1 :]:
            common |= nbrs[a] & nbrs[b]
    return len(common) < len(vs)


# -- realizable multiplicity lists for paths and cycles -------------------------


@lru_cache(maxsize=None)
def cycle_multiplicity_lists(n: int) -> frozenset:
    """All ordered multiplicity lists of matrices in S(C_n).

    Sorted eigenvalues pair up as (1,2),(3,4),... or as (1),(2,3),(4,5),...,
    and within each pair the two values may coincide.
    """
    if n < 3:
        raise ValueError("cycles have at least 3 vertices")
    out = set()
    for offset in (0, 1):
        blocks = [[0]] if offset else []
        i = offset
        while i < n:
            blocks.append(list(range(i, min(i + 2, n))))
            i += 2
        pairs = [b for b in blocks if len(b) == 2]
        for mask in range(1 << len(pairs)):
            m, pi = [], 0
            for b in blocks:
                if len(b) == 2:
                    m += [2] if mask >> pi & 1 else [1, 1]
                    pi += 1
                else:
                    m.append(1)
            out.add(tuple(m))
    return frozenset(out)


def _bordered_lower(lists, size_g: int) -> int:
    return min(join_q_lower_bound(m, size_g) if len(m) >= 2 else 1 for m in lists)


# -- aggregation ------------------------------------------------------------------


def _splits(G: Graph):
    """Every ``a`` with G equal to ``join(G[1..a], G[a+1..n])`` on the nose."""
    n = G.n
    for a in range(1, n):
        if all(G.has_edge(i, j) for i in range(1, a + 1) for j in range(a + 1, n + 1)):
            yield a, G.induced(range(1, a + 1)), G.induced(range(a + 1, n + 1))


def _family(H: Graph):
    """Recognise H as a standard family with its exact labelling."""
    n = H.n
    if n >= 1 and H == path(n):
        return "P", n
    if n >= 3 and H == cycle(n):
        return "C", n
    if n >= 1 and H == complete(n):
        return "K", n
    if H == empty_graph(n):
        return "E", n
    if n >= 2 and n & (n - 1) == 0 and H == hypercube(n.bit_length() - 1):
        return "Q", n.bit_length() - 1
    if n >= 3 and H == star(n):
        return "S", n
    return None


def _is_complete(H: Graph) -> bool:
    return H.num_edges == H.n * (H.n - 1) // 2


def _single_graph_rules(G: Graph, b: QBound) -> QBound:
    n = G.n
    fam = _family(G)
    if fam is None:
        return b
    kind, size = fam
    if kind == "E":
        return b.tighten(1, 1, "no edges: only diagonal matrices, q = 1")
    if kind == "P":
        return b.tighten(n, n, "paths force distinct eigenvalues: q(P_n) = n")
    if kind == "K":
        return b.tighten(2, 2, "q(K_n) = 2 for n >= 2")
    if kind == "C":
        v = _ceil_div(n, 2)
        return b.tighten(v, v, "cycle spectra alternate strict/weak: q(C_n) = ceil(n/2)")
    if kind == "Q":
        return b.tighten(2, 2, "hypercubes admit orthogonal realizations: q(Q_t) = 2")
    if kind == "S":
        return b.tighten(3, 3, "stars: q(S_n) = 3")
    return b


# verified constructions: (s, cycle length) -> q attained on K_s v C_n
_CERTIFIED_COMPLETE_CYCLE = {
    (2, 6): (2, "two-step bordering of a C6 realization lies in S(K2 v C6) with two eigenvalues"),
    (2, 10): (3, "numerical matrix in S(K2 v C10) with spectrum {(-6)^4, 0^4, 6^4}"),
}


def _join_rules(left: Graph, right: Graph, b: QBound) -> QBound:
    lf, rf = _family(left), _family(right)
    sizes = (left.n, right.n)
    if left.is_connected() and right.is_connected() and max(sizes) >= 2:
        b = b.tighten(upper=q_upper_general_join(*sizes), rule="general join bound ceil((|G|+|H|)/(min+1))")
    for other, fam in ((left, rf), (right, lf)):
        if fam is None:
            continue
        kind, size = fam
        g = other.n
        if kind == "P" and size >= 2:
            lists = [(1,) * size]
            b = b.tighten(
                lower=_bordered_lower(lists, g),
                rule="bordering P_m by |G| rows leaves C(1^m, t) <= |G|",
            )
            if other.is_connected() and g <= size:
                v = q_join_path(g, size)
                b = b.tighten(v, v, "q(G v P_m) = ceil((n+m)/(n+1)) for connected G, n <= m")
            if _is_complete(other) and g >= 2:
                v = q_complete_join_path(g, size)
                b = b.tighten(v, v, "q(K_n v P_m) = ceil((n+m)/(n+1))")
        if kind == "C":
            b = b.tighten(
                lower=_bordered_lower(cycle_multiplicity_lists(size), g),
                rule="bordering C_n by |G| rows: min over cycle multiplicity lists of min{t : C(m,t) <= |G|}",
            )
            if _is_complete(other):
                s = g
                if size % 2 == 0 and size >= 4:
                    k = size // 2
                    b = b.tighten(upper=k, rule="q(K_1 v C_2k) = k, and q(K_s v H) is nonincreasing in s")
                    if s == 1:
                        b = b.tighten(lower=k, rule="q(K_1 v C_2k) = k")
                    if s >= 2 * k - 2:
                        b = b.tighten(upper=2, rule="q(K_{2k-2} v C_2k) = 2, nonincreasing in s")
                for (s0, n0), (val, why) in _CERTIFIED_COMPLETE_CYCLE.items():
                    if n0 == size and s >= s0:
                        b = b.tighten(upper=val, rule=why + "; nonincreasing in s")
        if kind == "Q":
            if _is_complete(other):
                hb = hypercube_join_bound(g, size)
                b = b.tighten(hb.lower, hb.upper, "complete-hypercube join rules: " + "; ".join(hb.provenance))
                b = QBound(b.lower, b.upper, b.provenance, b.notes + tuple(x for x in hb.notes if x not in b.notes))
    return b


def q_bound_report(G: Graph, mult_list: Optional[Sequence[int]] = None) -> QBound:
    """Combine every applicable rule into one bound.

    ``mult_list`` is the ordered multiplicity list of a fixed matrix on the
    trailing part of a join split; the resulting bound applies to joins
    with that matrix held fixed, so it goes into the notes, not the bound.
    """
    n = G.n
    b = QBound(1 if n >= 1 else 0, n if n >= 1 else 0, ("1 <= q(G) <= |G|",))
    if G.num_edges:
        b = b.tighten(lower=2, rule="graph has an edge: q >= 2")
    b = _single_graph_rules(G, b)
    for a, left, right in _splits(G):
        b = _join_rules(left, right, b)
    if mult_list is not None:
        total = sum(mult_list)
        hit = [(a, left) for a, left, _ in _splits(G) if n - a == total]
        if not hit:
            b = b.with_note(f"multiplicity list of size {total} matches no trailing join part")
        else:
            a, _ = hit[0]
            v = join_q_lower_bound(list(mult_list), a)
            b = b.with_note(
                f"for a fixed matrix A on the trailing {total} vertices with list {tuple(mult_list)}: "
                f"q(G[1..{a}] v A) >= {v}"
            )
    return b
