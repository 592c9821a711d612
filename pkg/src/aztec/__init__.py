"""Exact computation on edge-weighted Aztec diamond graphs.

Weighted matching counts, per-edge inclusion probabilities and exact
random sampling by generalized domino-shuffling, plus embeddings of
square grids, hexagon honeycombs and fortresses, generating-function
tables for the fortress weighting, and SVG rendering.
"""

from .grid import (
    CellGrid,
    CellWeights,
    EdgeRef,
    Matching,
    all_ones,
    cell_factor,
    edge_vertices,
    urban_renewal_transform,
)
from .probs import ProbGrid, prob_sweep
from .reduction import ReductionTrace, count_matchings, reduce_once, reduce_trace, reduce_trace_auto
from .regions import embed_fortress, embed_grid, embed_hexagon, lift_matching, parse_region
from .scalars import Backend, EpsScalar, PoleAtZero, Rational, ZeroCellFactor, eps_limit0
from .shuffle import RandomSource, asm_of_matching, sample, shuffle_step

__all__ = [
    "CellGrid", "CellWeights", "EdgeRef", "Matching", "all_ones",
    "cell_factor", "edge_vertices", "urban_renewal_transform",
    "ProbGrid", "prob_sweep",
    "ReductionTrace", "count_matchings", "reduce_once", "reduce_trace",
    "reduce_trace_auto",
    "embed_fortress", "embed_grid", "embed_hexagon", "lift_matching",
    "parse_region",
    "Backend", "EpsScalar", "PoleAtZero", "Rational", "ZeroCellFactor",
    "eps_limit0",
    "RandomSource", "asm_of_matching", "sample", "shuffle_step",
]
