"""Matrices with few distinct eigenvalues on graph joins and borderings."""

from qjoin.errors import NonConvergence, NowhereZeroFailure
from qjoin.graphs import Graph
from qjoin.spectral import GapPartition, Spectrum

__all__ = ["Graph", "Spectrum", "GapPartition", "NonConvergence", "NowhereZeroFailure"]
__version__ = "0.1.0"
