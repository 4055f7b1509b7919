"""Build a matrix for K2 v (C6 v C7) with three distinct eigenvalues, starting from a realized base."""

import argparse

import numpy as np

from qjoin.graphs import complete, cycle, join, respects_pattern
from qjoin.joins import k2_join_construction
from qjoin.realizers import IepOptions, iep_solve
from qjoin.spectral import parse_spectrum, spectrum_of


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--gamma", type=float, default=2.0)
    ap.add_argument("--mu", type=float, default=4.5)
    args = ap.parse_args()

    base = join(cycle(6), cycle(7))
    target = parse_spectrum(f"0:3,{args.beta},{args.gamma},3:3,{args.mu}:2,6:3")
    A = iep_solve(base, target, IepOptions(seed=args.seed))
    print("base spectrum  ", spectrum_of(A, 1e-8))
    B = k2_join_construction(A, args.beta, args.gamma, [args.mu], seed=args.seed)
    print("joined spectrum", spectrum_of(B, 1e-8))
    print("pattern K2 v G ", respects_pattern(B, join(complete(2), base)))
    print("smallest |entry| on the join edges", float(np.min(np.abs(B[:2, 2:]))))


if __name__ == "__main__":
    main()
