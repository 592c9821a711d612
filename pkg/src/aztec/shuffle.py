"""Random matching generation by generalized domino-shuffling.

One step grows a perfect matching of order k-1 into one of order k:

1. embed the matching concentrically (each edge keeps its lattice
   segment, acquiring an order-k edge id);
2. destruction: any order-k cell holding two matched edges loses both;
3. sliding: every remaining matched edge moves to the opposite slot of
   its cell;
4. creation: the uncovered vertices decompose uniquely into cells with
   all four corners free; each such cell is filled with {NW, SE} with
   probability wz/(wz+xy), else {NE, SW}, using the order-k weights
   from the reduction trace.

Iterating from the empty matching of order 0 samples a perfect matching
of order n with probability weight/total, exactly.  Creation consumes
one uniform variate per fillable cell, levels ascending and cells in
row-major order, so a seed pins the output.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import numpy as np

from .grid import (
    NW, NE, SW, SE, SLOTS, OPPOSITE,
    CellGrid, EdgeRef, InvalidMatching, Matching,
    cell_factor, edge_vertices, slot_map_small_to_large,
)
from .probs import ProbGrid
from .reduction import ReductionTrace
from .scalars import EPS, FLOAT64, eps_limit0


class RandomSource:
    """Deterministic uniform stream; identical seed => identical matching."""

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def creation_choice(self, bias) -> bool:
        """True picks the {NW, SE} pair.  Exact comparison for exact biases."""
        u = self._rng.random()
        if isinstance(bias, float):
            return u < bias
        return Fraction(u) < bias

    def uniform(self) -> float:
        return self._rng.random()


def creation_bias_plane(trace: ReductionTrace, k: int):
    """Per-cell probability of the {NW, SE} pair at level k."""
    g = trace.grid_of_order(k)
    if g.is_float:
        return (g.w * g.z) / (g.w * g.z + g.x * g.y)
    plane = []
    for i in range(k):
        row = []
        for j in range(k):
            cw = g.cell(i + 1, j + 1)
            b = cw.w * cw.z / cell_factor(cw)
            if trace.backend == EPS:
                b = eps_limit0(b)
            row.append(b)
        plane.append(row)
    return plane


def shuffle_partial(m: Matching, k: int):
    """Embed, destroy and slide: the deterministic part of one step.

    Returns (slid edge set, cells to create in row-major order).  The
    cells to create are the unique vertex-disjoint cover of the free
    vertices: scanning rows top to bottom, a still-free vertex forces
    the cell having it as its top corner (any other covering cell would
    leave an earlier free vertex).  Raises if the cover fails to exist,
    which no perfect input matching can cause.
    """
    per_cell: dict[tuple[int, int], set[str]] = {}
    for e in m.edges:
        big = slot_map_small_to_large(e.r, e.c, e.slot)
        per_cell.setdefault((big.r, big.c), set()).add(big.slot)

    slid: set[EdgeRef] = set()
    for (r, c), slots in per_cell.items():
        if len(slots) == 2:
            if slots not in ({NW, SE}, {NE, SW}):
                raise InvalidMatching(f"non-opposite pair {slots} in cell {(r, c)}")
            continue  # destruction
        if len(slots) > 2:
            raise InvalidMatching(f"{len(slots)} edges in one cell")
        (slot,) = slots
        slid.add(EdgeRef(r, c, OPPOSITE[slot]))

    covered: set[tuple[int, int]] = set()
    for e in slid:
        covered |= edge_vertices(k, e)

    fillable = []
    for r in range(1, k + 1):
        for c in range(1, k + 1):
            north, west, east, south = _cell_corners(k, r, c)
            if north in covered:
                continue
            for v in (west, east, south):
                if v in covered:
                    raise InvalidMatching(
                        f"free vertex {north} forces cell {(r, c)} but {v} is taken"
                    )
            covered.update((north, west, east, south))
            fillable.append((r, c))
    if len(covered) != 2 * k * (k + 1):
        raise InvalidMatching("creation cells do not cover all free vertices")
    return slid, fillable


def _cell_corners(n, r, c):
    cx, cy = 2 * c - n - 1, n + 1 - 2 * r
    return ((cx, cy + 1), (cx - 1, cy), (cx + 1, cy), (cx, cy - 1))


def fill_cells(slid: set[EdgeRef], fillable, choices) -> set[EdgeRef]:
    out = set(slid)
    for (r, c), para in zip(fillable, choices):
        if para:
            out.add(EdgeRef(r, c, NW))
            out.add(EdgeRef(r, c, SE))
        else:
            out.add(EdgeRef(r, c, NE))
            out.add(EdgeRef(r, c, SW))
    return out


def shuffle_step(m: Matching, trace: ReductionTrace, rng: RandomSource, biases=None) -> Matching:
    """One destruction/sliding/creation step, order k-1 to k."""
    k = m.order + 1
    if k > trace.order:
        raise ValueError("trace too short for this step")
    if m.order and not m.is_perfect():
        raise InvalidMatching("input matching is not perfect")
    slid, fillable = shuffle_partial(m, k)
    if biases is None:
        biases = creation_bias_plane(trace, k)
    choices = [rng.creation_choice(biases[r - 1][c - 1]) for r, c in fillable]
    return Matching(k, frozenset(fill_cells(slid, fillable, choices)))


_BIAS_CACHE: dict[int, tuple] = {}


def _cached_biases(trace: ReductionTrace):
    key = id(trace)
    hit = _BIAS_CACHE.get(key)
    if hit is None or hit[0] is not trace:
        planes = tuple(creation_bias_plane(trace, k) for k in range(1, trace.order + 1))
        _BIAS_CACHE.clear()
        _BIAS_CACHE[key] = (trace, planes)
        return planes
    return hit[1]


def sample(trace: ReductionTrace, rng: RandomSource) -> Matching:
    """A random perfect matching, distributed as weight/total."""
    if trace.grids and trace.grids[0].is_float:
        return _sample_float(trace, rng)
    m = Matching(0)
    biases = _cached_biases(trace)
    for k in range(1, trace.order + 1):
        m = shuffle_step(m, trace, rng, biases[k - 1])
    return m


def exact_distribution(trace: ReductionTrace) -> dict[frozenset, Fraction]:
    """Enumerate every creation-decision path and aggregate exactly.

    Returns {edge set: probability}.  Feasible only at desk scale; used
    to verify the sampler's distribution with no sampling noise.
    """
    bias_cache = {k: creation_bias_plane(trace, k) for k in range(1, trace.order + 1)}
    out: dict[frozenset, Fraction] = {}

    def walk(m: Matching, prob: Fraction):
        if m.order == trace.order:
            out[m.edges] = out.get(m.edges, Fraction(0)) + prob
            return
        k = m.order + 1
        slid, fillable = shuffle_partial(m, k)
        biases = [bias_cache[k][r - 1][c - 1] for r, c in fillable]
        for choices in product((True, False), repeat=len(fillable)):
            p = prob
            for b, ch in zip(biases, choices):
                p *= b if ch else 1 - b
            if p == 0:
                continue
            walk(Matching(k, frozenset(fill_cells(slid, fillable, choices))), p)

    walk(Matching(0), Fraction(1))
    return out


# -- float64 fast path --------------------------------------------------------

def _sample_float(trace: ReductionTrace, rng: RandomSource) -> Matching:
    n = trace.order
    all_biases = _cached_biases(trace)
    planes = {s: np.zeros((0, 0), dtype=bool) for s in SLOTS}
    for k in range(1, n + 1):
        small = planes
        planes = {s: np.zeros((k, k), dtype=bool) for s in SLOTS}
        if k > 1:
            planes[SE][: k - 1, : k - 1] = small[NW]
            planes[SW][: k - 1, 1:] = small[NE]
            planes[NE][1:, : k - 1] = small[SW]
            planes[NW][1:, 1:] = small[SE]
        # destruction
        para = planes[NW] & planes[SE]
        anti = planes[NE] & planes[SW]
        planes[NW] &= ~para
        planes[SE] &= ~para
        planes[NE] &= ~anti
        planes[SW] &= ~anti
        # sliding
        planes[NW], planes[SE] = planes[SE], planes[NW]
        planes[NE], planes[SW] = planes[SW], planes[NE]
        # creation: row-by-row top-down scan for the unique cover
        cov_h = np.zeros((k + 1, k), dtype=bool)  # N/S-type vertices
        cov_v = np.zeros((k, k + 1), dtype=bool)  # W/E-type vertices
        cov_h[:k] |= planes[NW] | planes[NE]
        cov_h[1:] |= planes[SW] | planes[SE]
        cov_v[:, :k] |= planes[NW] | planes[SW]
        cov_v[:, 1:] |= planes[NE] | planes[SE]
        fillable = np.zeros((k, k), dtype=bool)
        for row in range(k):
            fill = ~cov_h[row]
            if not fill.any():
                continue
            if (fill[:-1] & fill[1:]).any():
                raise InvalidMatching("adjacent forced creation cells overlap")
            if (cov_h[row + 1][fill].any() or cov_v[row, :k][fill].any()
                    or cov_v[row, 1:][fill].any()):
                raise InvalidMatching("forced creation cell has a taken corner")
            fillable[row] = fill
            cov_h[row] |= fill
            cov_h[row + 1] |= fill
            cov_v[row, :k] |= fill
            cov_v[row, 1:] |= fill
        if not (cov_h.all() and cov_v.all()):
            raise InvalidMatching("creation cells do not cover all free vertices")
        count = int(fillable.sum())
        if count:
            us = np.fromiter((rng.uniform() for _ in range(count)), dtype=np.float64, count=count)
            bias = all_biases[k - 1]
            para_choice = us < bias[fillable]
            idx = np.nonzero(fillable)
            planes[NW][idx] = para_choice
            planes[SE][idx] = para_choice
            planes[NE][idx] = ~para_choice
            planes[SW][idx] = ~para_choice
    edges = set()
    for slot in SLOTS:
        for i, j in zip(*np.nonzero(planes[slot])):
            edges.add(EdgeRef(int(i) + 1, int(j) + 1, slot))
    return Matching(n, frozenset(edges))


# -- alternating-sign matrices ------------------------------------------------

def asm_of_matching(m: Matching) -> list[list[int]]:
    """Entry (r, c) = (matched edges in cell (r, c)) - 1."""
    n = m.order
    counts = [[0] * n for _ in range(n)]
    for e in m.edges:
        counts[e.r - 1][e.c - 1] += 1
    return [[v - 1 for v in row] for row in counts]


def is_valid_asm(matrix: list[list[int]]) -> bool:
    """Rows and columns sum to 1 with nonzero entries alternating in sign."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        return False
    lines = list(matrix) + [[matrix[i][j] for i in range(n)] for j in range(n)]
    for line in lines:
        if sum(line) != 1:
            return False
        nonzero = [v for v in line if v != 0]
        if not nonzero or nonzero[0] != 1 or nonzero[-1] != 1:
            return False
        for a, b in zip(nonzero, nonzero[1:]):
            if a + b != 0:
                return False
        if any(v not in (-1, 0, 1) for v in line):
            return False
    return True


def strip_parallel_pairs(m: Matching) -> frozenset[EdgeRef]:
    """Remove both edges of every cell holding two matched edges."""
    per_cell: dict[tuple[int, int], list[EdgeRef]] = {}
    for e in m.edges:
        per_cell.setdefault((e.r, e.c), []).append(e)
    out = set()
    for edges in per_cell.values():
        if len(edges) == 1:
            out.add(edges[0])
    return frozenset(out)
