"""Spectral analysis of Toeplitz, multilevel and diamond Toeplitz graphs.

Graphs are described by small spec objects, assembled into sparse symmetric
adjacency matrices, and compared with the monotone rearrangement of their
trigonometric-polynomial symbols.
"""
from .graphs import (
    DiamondGraphSpec,
    DLevelGraphSpec,
    SpecError,
    ToeplitzGraphSpec,
    build,
    graph_laplacian,
    load_spec,
    node_edge_counts,
    save_spec,
)
from .rearrangement import Rearrangement, rearrange, sample_symbol
from .spectral import Spectrum, extreme_gap, gap_ratio, sym_eigs, weyl_errors
from .symbol import TrigSymbol, WeightedSymbol, image_intervals, symbol_of

__version__ = "0.1.0"

__all__ = [
    "DiamondGraphSpec", "DLevelGraphSpec", "SpecError", "ToeplitzGraphSpec", "build",
    "graph_laplacian", "load_spec", "node_edge_counts", "save_spec", "Rearrangement",
    "rearrange", "sample_symbol", "Spectrum", "extreme_gap", "gap_ratio", "sym_eigs",
    "weyl_errors", "TrigSymbol", "WeightedSymbol", "image_intervals", "symbol_of",
]
