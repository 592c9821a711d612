"""The forward reduction: one urban-renewal sweep per order.

Renewing every cell of an order-n diamond and stripping the outer flank
leaves an order-(n-1) diamond whose cell (r, c) keeps each slot's own
letter from the adjacent old cell, divided by that cell's factor:

    w' = w(r, c)     / D(r, c)        x' = x(r, c+1)   / D(r, c+1)
    y' = y(r+1, c)   / D(r+1, c)      z' = z(r+1, c+1) / D(r+1, c+1)

The weighted matching count of the original graph is the product of all
n^2 + (n-1)^2 + ... + 1 cell factors collected along the way.  The full
stack of intermediate grids (orders n..1) is kept: the probability sweep
and the shuffling sampler both consume those exact weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .grid import CellGrid, CellWeights, cell_factor, grid_from_cells, grid_to_json, grid_from_json
from .scalars import EXACT, EPS, FLOAT64, Backend, EpsScalar, PoleAtZero, ZeroCellFactor, eps_limit0


@dataclass(frozen=True)
class ReductionTrace:
    """Grids of orders n, n-1, ..., 1 plus the per-cell factors.

    grids[0] is the original order-n grid; grids[n-k] has order k.
    factors[i] is the factor plane of grids[i] (same layout as a weight
    plane).  Order 0 is empty and implicit.
    """

    grids: tuple[CellGrid, ...]
    factors: tuple[object, ...]
    backend: str = EXACT

    @property
    def order(self) -> int:
        return self.grids[0].order if self.grids else 0

    def grid_of_order(self, k: int) -> CellGrid:
        if not (1 <= k <= self.order):
            raise IndexError(f"no grid of order {k} in trace of order {self.order}")
        return self.grids[self.order - k]

    def factor_product(self):
        total = Fraction(1) if self.backend != FLOAT64 else 1.0
        if self.backend == EPS:
            total = EpsScalar.const(1)
        for plane in self.factors:
            if isinstance(plane, np.ndarray):
                total = total * float(np.prod(plane))
            else:
                for row in plane:
                    for v in row:
                        total = total * v
        return total


def _factor_plane(g: CellGrid):
    n = g.order
    if g.is_float:
        return g.w * g.z + g.x * g.y
    plane = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            plane[i][j] = g.w[i][j] * g.z[i][j] + g.x[i][j] * g.y[i][j]
    return plane


def reduce_once(g: CellGrid) -> CellGrid:
    grid, _ = reduce_once_with_factors(g)
    return grid


def reduce_once_with_factors(g: CellGrid):
    n = g.order
    if n < 1:
        raise ValueError("cannot reduce order 0")
    delta = _factor_plane(g)
    if g.is_float:
        if np.any(delta == 0.0):
            i, j = np.argwhere(delta == 0.0)[0]
            raise ZeroCellFactor(n, int(i) + 1, int(j) + 1)
        small = CellGrid(
            n - 1,
            g.w[:-1, :-1] / delta[:-1, :-1],
            g.x[:-1, 1:] / delta[:-1, 1:],
            g.y[1:, :-1] / delta[1:, :-1],
            g.z[1:, 1:] / delta[1:, 1:],
        )
        return small, delta
    for i in range(n):
        for j in range(n):
            v = delta[i][j]
            if (v.is_zero() if isinstance(v, EpsScalar) else v == 0):
                raise ZeroCellFactor(n, i + 1, j + 1)
    m = n - 1
    w = [[g.w[i][j] / delta[i][j] for j in range(m)] for i in range(m)]
    x = [[g.x[i][j + 1] / delta[i][j + 1] for j in range(m)] for i in range(m)]
    y = [[g.y[i + 1][j] / delta[i + 1][j] for j in range(m)] for i in range(m)]
    z = [[g.z[i + 1][j + 1] / delta[i + 1][j + 1] for j in range(m)] for i in range(m)]
    return CellGrid(m, w, x, y, z), delta


def reduce_trace(g: CellGrid, backend: str = EXACT) -> ReductionTrace:
    """Run the reduction all the way down, keeping every level.

    Weights are never rescaled between levels; the probability sweep
    needs the exact transformed values.
    """
    grids = [g]
    factors = []
    cur = g
    while cur.order > 1:
        cur, delta = reduce_once_with_factors(cur)
        factors.append(delta)
        grids.append(cur)
    if cur.order == 1:
        factors.append(_factor_plane(cur))
    return ReductionTrace(tuple(grids), tuple(factors), backend)


def grid_with_eps(g: CellGrid) -> CellGrid:
    """Replace every zero weight by the shared infinitesimal e."""

    def lift(v):
        return EpsScalar.epsilon() if v == 0 else EpsScalar.const(Fraction(v))

    return g.map_weights(lift)


def reduce_trace_auto(g: CellGrid, backend: str = EXACT) -> ReductionTrace:
    """reduce_trace with transparent escalation to the eps backend.

    Under the default exact backend, a zero cell factor anywhere restarts
    the whole reduction with every original zero weight replaced by one
    shared e, so the cached trace is internally consistent.
    """
    if backend == FLOAT64:
        return reduce_trace(g.to_float(), FLOAT64)
    if backend == EPS:
        return reduce_trace(grid_with_eps(g), EPS)
    try:
        return reduce_trace(g, EXACT)
    except ZeroCellFactor:
        return reduce_trace(grid_with_eps(g), EPS)


def count_matchings(g: CellGrid, backend: str = EXACT):
    """The sum over perfect matchings of the product of edge weights.

    Equals the product of every cell factor in the trace.  Raises
    PoleAtZero when the weighting admits no positive-weight matching
    (the count's eps-limit is then 0, and probabilities downstream would
    be ill-defined).
    """
    if g.order == 0:
        return Fraction(1)
    trace = reduce_trace_auto(g, backend)
    total = trace.factor_product()
    if trace.backend == EPS:
        total = eps_limit0(total)
        if total == 0:
            raise PoleAtZero("no positive-weight perfect matching")
    return total


def trace_to_json(trace: ReductionTrace) -> dict:
    if trace.backend == FLOAT64:
        raise ValueError("float64 traces are not serialized")
    from .scalars import format_scalar

    return {
        "backend": trace.backend,
        "grids": [grid_to_json(g) for g in trace.grids],
        "factors": [
            [[format_scalar(v) for v in row] for row in plane] for plane in trace.factors
        ],
    }


def trace_from_json(data: dict) -> ReductionTrace:
    from .scalars import parse_scalar

    grids = tuple(grid_from_json(g) for g in data["grids"])
    factors = tuple(
        [[parse_scalar(v) for v in row] for row in plane] for plane in data["factors"]
    )
    return ReductionTrace(grids, factors, data["backend"])
