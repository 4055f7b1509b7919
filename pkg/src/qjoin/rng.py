"""Seeded, counter-based random streams.

Every random choice in the package is drawn from a generator built here, so
that any sub-task can be reproduced from ``(seed, *keys)`` alone.
"""

import numpy as np


def make_rng(seed, *keys):
    """Philox generator for the stream ``(seed, *keys)``.

    Keys are non-negative integers naming a sub-task (restart number, retry
    counter, ...). Distinct key tuples give independent streams.
    """
    entropy = [int(seed)] + [int(k) for k in keys]
    if any(e < 0 for e in entropy):
        raise ValueError("seed and keys must be non-negative integers")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def random_orthogonal(d, rng):
    """Haar-distributed ``d x d`` orthogonal matrix (QR with sign fix)."""
    if d == 0:
        return np.zeros((0, 0))
    z = rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * np.sign(np.diag(r))


def random_unit_vector(d, rng):
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)
