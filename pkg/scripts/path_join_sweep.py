"""Sweep P_n v P_m over a grid and compare the achieved q with ceil((n+m)/(n+1))."""

import argparse
import math
from dataclasses import dataclass

from qjoin.graphs import join, path, respects_pattern
from qjoin.joins import assemble_join, design_join_spectrum
from qjoin.realizers import IepOptions
from qjoin.spectral import spectrum_of


@dataclass
class SweepConfig:
    max_n: int = 6
    max_m: int = 12
    seed: int = 0
    cluster_tol: float = 1e-8
    budget: int = 16


def run(cfg: SweepConfig) -> list[tuple]:
    rows = []
    for n in range(1, cfg.max_n + 1):
        for m in range(max(n, 2), cfg.max_m + 1):
            want = math.ceil((n + m) / (n + 1))
            design = design_join_spectrum(n, m, want - 1, cfg.seed)
            res = assemble_join(design, path(n), path(m), IepOptions(seed=cfg.seed), budget=cfg.budget)
            q = spectrum_of(res.matrix, cfg.cluster_tol).q
            ok = q == want and respects_pattern(res.matrix, join(path(n), path(m)))
            rows.append((n, m, want, q, res.attempts, ok))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(SweepConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = SweepConfig(**vars(ap.parse_args()))
    rows = run(cfg)
    print(f"{'n':>3} {'m':>3} {'want':>5} {'q':>3} {'tries':>5}  ok")
    for n, m, want, q, tries, ok in rows:
        print(f"{n:3d} {m:3d} {want:5d} {q:3d} {tries:5d}  {'yes' if ok else 'NO'}")
    print(f"{sum(r[-1] for r in rows)}/{len(rows)} joins attain the formula")


if __name__ == "__main__":
    main()
