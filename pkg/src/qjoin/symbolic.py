"""Exhaustive search over spectra reachable by C-decreasing 1-borderings.

New eigenvalues are symbols whose only meaning is their position in a total
order with the concrete eigenvalues of the start spectrum. A search state is
such an order; concrete values that drop to multiplicity zero stay in the
order as ghosts because they still delimit where symbols may sit.

Terminal states are then grouped into families: a symbol ranges over a
contiguous run of "atoms" of the concrete line (open gaps and the concrete
points themselves), which is what the interval notation reports.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from qjoin.spectral import Spectrum, c_of

# a point is ("c", value, mult) or ("s", ident, mult)


def _c_value(state, t) -> int:
    m = [p[2] for p in state if p[2] > 0]
    if len(m) < 2:
        return 0
    return c_of(m, t)[0]


def _canonical(state):
    """Drop zero-multiplicity symbols and renumber symbols left to right."""
    out, k = [], 0
    for kind, label, m in state:
        if kind == "s":
            if m == 0:
                continue
            out.append(("s", k, m))
            k += 1
        else:
            out.append((kind, label, m))
    return tuple(out)


def _successors(state, t, target_c):
    """All states one bordering away whose C equals ``target_c``."""
    n = len(state)
    vis_idx = [i for i, p in enumerate(state) if p[2] > 0]
    results = set()
    for size in range(0, len(vis_idx) + 1):
        for R0 in itertools.combinations(vis_idx, size):
            bounds = (-1,) + R0 + (n,)
            slot_options = []
            for lo, hi in zip(bounds, bounds[1:]):
                opts = []
                # an existing point strictly inside the slot (visible, or a concrete ghost)
                for i in range(lo + 1, hi):
                    if state[i][2] > 0 or state[i][0] == "c":
                        opts.append(("pick", i))
                # a new symbol inserted just before position g, lo < g <= hi
                for g in range(lo + 1, hi + 1):
                    opts.append(("new", g))
                slot_options.append(opts)
            for choice in itertools.product(*slot_options):
                mults = [p[2] for p in state]
                for i in R0:
                    mults[i] -= 1
                inserts = []
                for kind, i in choice:
                    if kind == "pick":
                        mults[i] += 1
                    else:
                        inserts.append(i)
                new = []
                fresh = 1000
                for i in range(n + 1):
                    if i in inserts:
                        new.append(("s", fresh, 1))
                        fresh += 1
                    if i < n:
                        new.append((state[i][0], state[i][1], mults[i]))
                new = _canonical(new)
                if _c_value(new, t) == target_c:
                    results.add(new)
    return results


def _search(s: Spectrum, t: int, r: int):
    start = tuple(("c", v, m) for v, m in s.entries)
    c0 = _c_value(start, t)
    levels = [{start}]
    for ell in range(1, r + 1):
        nxt = set()
        for st in levels[-1]:
            nxt |= _successors(st, t, c0 - ell)
        levels.append(nxt)
    return levels


# -- families ----------------------------------------------------------------


@dataclass(frozen=True)
class SymbolInterval:
    """One symbolic eigenvalue: its multiplicity and the interval it ranges over."""

    name: str
    multiplicity: int
    lower: float
    upper: float
    lower_closed: bool
    upper_closed: bool
    above: tuple[str, ...] = ()  # symbols this one must exceed (where their intervals overlap)

    def __post_init__(self):
        if self.lower > self.upper or (
            self.lower == self.upper and not (self.lower_closed and self.upper_closed)
        ):
            raise ValueError(f"empty interval for {self.name}")

    def contains(self, x: float) -> bool:
        lo_ok = x >= self.lower if self.lower_closed else x > self.lower
        hi_ok = x <= self.upper if self.upper_closed else x < self.upper
        return lo_ok and hi_ok

    def interval_text(self) -> str:
        lo = f"{self.lower:g}" if math.isfinite(self.lower) else "-inf"
        hi = f"{self.upper:g}" if math.isfinite(self.upper) else "inf"
        return ("[" if self.lower_closed else "(") + lo + ", " + hi + ("]" if self.upper_closed else ")")


@dataclass(frozen=True)
class SymbolicSpectrumFamily:
    anchors: tuple[tuple[float, int], ...]
    symbols: tuple[SymbolInterval, ...]

    @property
    def dimension(self) -> int:
        return sum(m for _, m in self.anchors) + sum(s.multiplicity for s in self.symbols)

    def is_concrete(self) -> bool:
        return not self.symbols

    def instantiate(self, values: dict) -> Spectrum:
        """Concrete spectrum for given symbol values (checked against the constraints)."""
        for s in self.symbols:
            x = values[s.name]
            if not s.contains(x):
                raise ValueError(f"{s.name}={x} outside {s.interval_text()}")
            for other in s.above:
                if not x > values[other]:
                    raise ValueError(f"{s.name} must exceed {other}")
        pairs = list(self.anchors) + [(values[s.name], s.multiplicity) for s in self.symbols]
        return Spectrum.from_pairs(pairs)

    def __str__(self):
        parts = [f"{v:g}" if m == 1 else f"{v:g}^{m}" for v, m in self.anchors]
        parts += [s.name if s.multiplicity == 1 else f"{s.name}^{s.multiplicity}" for s in self.symbols]
        cons = []
        for s in self.symbols:
            c = f"{s.name} in {s.interval_text()}"
            if s.above:
                c += " and > " + ", ".join(s.above)
            cons.append(c)
        return "{" + ", ".join(parts) + "}" + (" with " + "; ".join(cons) if cons else "")


def _to_atoms(state, concretes):
    """Project a state to (anchors, symbols-in-order as (mult, atom))."""
    index = {v: i for i, v in enumerate(concretes)}
    anchors, symbols = [], []
    last_concrete = -1
    for kind, label, m in state:
        if kind == "c":
            last_concrete = index[label]
            if m > 0:
                anchors.append((label, m))
        else:
            # gap atoms sit at even indices: gap before concretes[0] is 0
            symbols.append((m, 2 * (last_concrete + 1), 2 * (last_concrete + 1)))
    return tuple(anchors), tuple(symbols)


def _add_anchor(anchors, value, m):
    acc = dict(anchors)
    acc[value] = acc.get(value, 0) + m
    return tuple(sorted(acc.items()))


def _merge(families: set, concretes) -> set:
    """Close symbol ranges under the two absorption rules until nothing changes."""
    fams = set(families)
    changed = True
    while changed:
        changed = False
        # a family with a symbol placed on a neighbouring concrete point is absorbed
        absorbed, grown = set(), {}
        for anchors, syms in fams:
            for i, (m, lo, hi) in enumerate(syms):
                for atom in (lo - 1, hi + 1):
                    if atom % 2 == 1 and 0 <= (atom - 1) // 2 < len(concretes):
                        c = concretes[(atom - 1) // 2]
                        rest = syms[:i] + syms[i + 1 :]
                        other = (_add_anchor(anchors, c, m), rest)
                        if other in fams:
                            absorbed.add(other)
                            nlo, nhi = min(lo, atom), max(hi, atom)
                            key = (anchors, syms)
                            cur = grown.get(key, syms)
                            cur = cur[:i] + ((m, min(cur[i][1], nlo), max(cur[i][2], nhi)),) + cur[i + 1 :]
                            grown[key] = cur
        if absorbed or grown:
            new = set()
            for f in fams:
                if f in absorbed and f not in grown:
                    continue
                new.add((f[0], grown.get(f, f[1])))
            if new != fams:
                fams, changed = new, True
        # two families differing only in one symbol's range, with contiguous union
        flist = sorted(fams, key=repr)
        for a, b in itertools.combinations(flist, 2):
            if a[0] != b[0] or len(a[1]) != len(b[1]):
                continue
            diff = [i for i, (x, y) in enumerate(zip(a[1], b[1])) if x != y]
            if len(diff) != 1:
                continue
            i = diff[0]
            (ma, la, ha), (mb, lb, hb) = a[1][i], b[1][i]
            if ma != mb or lb > ha + 1 or la > hb + 1:
                continue
            merged = (a[0], a[1][:i] + ((ma, min(la, lb), max(ha, hb)),) + a[1][i + 1 :])
            fams = (fams - {a, b}) | {merged}
            changed = True
            break
    return fams


def _atom_bounds(lo_atom, hi_atom, concretes):
    def lower(atom):
        if atom % 2 == 1:
            return concretes[(atom - 1) // 2], True
        j = atom // 2
        return (concretes[j - 1], False) if j > 0 else (-math.inf, False)

    def upper(atom):
        if atom % 2 == 1:
            return concretes[(atom - 1) // 2], True
        j = atom // 2
        return (concretes[j], False) if j < len(concretes) else (math.inf, False)

    lo, lc = lower(lo_atom)
    hi, hc = upper(hi_atom)
    return lo, hi, lc, hc


def _to_family(fam, concretes) -> SymbolicSpectrumFamily:
    anchors, syms = fam
    out = []
    for i, (m, lo, hi) in enumerate(syms):
        a, b, ac, bc = _atom_bounds(lo, hi, concretes)
        above = tuple(
            f"x{j + 1}" for j in range(i) if not (syms[j][2] < lo or syms[j][1] > hi)
        )
        out.append(SymbolInterval(f"x{i + 1}", m, a, b, ac, bc, above))
    return SymbolicSpectrumFamily(anchors, tuple(out))


def _family_sort_key(f: SymbolicSpectrumFamily):
    return (len(f.symbols), tuple(-m for _, m in f.anchors), str(f))


def enumerate_bordering_levels(s: Spectrum, t: int, r: int) -> list[list[SymbolicSpectrumFamily]]:
    """Families at every depth ``0..r`` that lie on some complete C-decreasing chain."""
    if t < 2:
        raise ValueError("t must be at least 2")
    levels = _search(s, t, r)
    # keep only states with a continuation to depth r
    alive = [set() for _ in levels]
    alive[-1] = set(levels[-1])
    c0 = _c_value(next(iter(levels[0])), t)
    for ell in range(len(levels) - 2, -1, -1):
        for st in levels[ell]:
            if _successors(st, t, c0 - ell - 1) & alive[ell + 1]:
                alive[ell].add(st)
    concretes = tuple(s.values)
    out = []
    for states in alive:
        fams = _merge({_to_atoms(st, concretes) for st in states}, concretes)
        out.append(sorted((_to_family(f, concretes) for f in fams), key=_family_sort_key))
    return out


def enumerate_bordering_spectra(s: Spectrum, t: int, r: int) -> list[SymbolicSpectrumFamily]:
    """Terminal families after ``r`` borderings, each lowering ``C(m, t)`` by one."""
    if t < 2:
        raise ValueError("t must be at least 2")
    levels = _search(s, t, r)
    concretes = tuple(s.values)
    fams = _merge({_to_atoms(st, concretes) for st in levels[-1]}, concretes)
    return sorted((_to_family(f, concretes) for f in fams), key=_family_sort_key)
