"""Plain-text matrix, graph and spectrum files."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from qjoin.graphs import Graph
from qjoin.spectral import Spectrum

MATRIX_DIGITS = 17


def format_matrix(A) -> str:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    rows = [" ".join(f"{x:.{MATRIX_DIGITS}g}" for x in row) for row in A]
    return "\n".join([str(A.shape[0])] + rows) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    """Inverse of :func:`format_matrix`: a size line, then that many rows."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    n = int(lines[0])
    if len(lines) - 1 != n:
        raise ValueError(f"header says {n} rows, found {len(lines) - 1}")
    A = np.array([[float(x) for x in ln.split()] for ln in lines[1:]], dtype=float).reshape(n, -1)
    if A.shape != (n, n):
        raise ValueError(f"rows must have {n} entries")
    return A


def save_matrix(path, A) -> None:
    Path(path).write_text(format_matrix(A))


def load_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def save_graph(path, G: Graph) -> None:
    Path(path).write_text(G.to_text())


def load_graph(path) -> Graph:
    return Graph.from_text(Path(path).read_text())


def save_spectrum(path, s: Spectrum) -> None:
    Path(path).write_text(s.to_json() + "\n")


def load_spectrum(path) -> Spectrum:
    return Spectrum.from_json(Path(path).read_text())
