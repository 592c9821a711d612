"""Data model for edge-weighted Aztec diamond graphs.

The order-n diamond lives on the diagonal lattice: vertices are the
integer points (i, j) with i+j odd and |i|, |j| <= n.  Its edge set
partitions into n^2 four-cycles ("cells").  Cell (r, c) -- row r from
the top, column c from the left, both 1-based -- has geometric center
(2c-n-1, n+1-2r), and its four edges sit in slots:

        NW   NE            w   x
           *        with       *       (weight letters by slot)
        SW   SE            y   z

Every edge of the diamond is identified by exactly one (r, c, slot)
triple, which is the canonical edge id everywhere in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple

import numpy as np

from .scalars import (
    Scalar,
    ZeroCellFactor,
    format_scalar,
    parse_scalar,
)

NW, NE, SW, SE = "NW", "NE", "SW", "SE"
SLOTS = (NW, NE, SW, SE)
OPPOSITE = {NW: SE, SE: NW, NE: SW, SW: NE}


class InvalidEdge(ValueError):
    pass


class InvalidMatching(ValueError):
    pass


class EdgeRef(NamedTuple):
    r: int
    c: int
    slot: str


class CellWeights(NamedTuple):
    w: Scalar
    x: Scalar
    y: Scalar
    z: Scalar


def cell_factor(cw: CellWeights) -> Scalar:
    """The cell factor wz + xy."""
    return cw.w * cw.z + cw.x * cw.y


def urban_renewal_transform(cw: CellWeights) -> CellWeights:
    """(w, x, y, z) -> (z, y, x, w) / (wz + xy).

    Raises ZeroCellFactor when the factor is exactly zero; the caller is
    expected to escalate to the eps backend in that case.
    """
    delta = cell_factor(cw)
    if _scalar_is_zero(delta):
        raise ZeroCellFactor(0, 0, 0)
    return CellWeights(cw.z / delta, cw.y / delta, cw.x / delta, cw.w / delta)


def _scalar_is_zero(v) -> bool:
    if isinstance(v, float):
        return v == 0.0
    if hasattr(v, "is_zero"):
        return v.is_zero()
    return v == 0


@dataclass(frozen=True)
class CellGrid:
    """An order-n diamond's weights, stored as four n x n slot planes.

    Planes are lists of lists for exact scalars, or float64 numpy arrays
    under the float backend.  Public cell indices are 1-based.
    """

    order: int
    w: object
    x: object
    y: object
    z: object

    @property
    def is_float(self) -> bool:
        return isinstance(self.w, np.ndarray)

    def cell(self, r: int, c: int) -> CellWeights:
        if not (1 <= r <= self.order and 1 <= c <= self.order):
            raise InvalidEdge(f"cell ({r}, {c}) out of range for order {self.order}")
        i, j = r - 1, c - 1
        return CellWeights(self.w[i][j], self.x[i][j], self.y[i][j], self.z[i][j])

    def weight(self, e: EdgeRef) -> Scalar:
        cw = self.cell(e.r, e.c)
        return getattr(cw, _SLOT_LETTER[e.slot])

    def cells(self) -> Iterator[tuple[int, int, CellWeights]]:
        for r in range(1, self.order + 1):
            for c in range(1, self.order + 1):
                yield r, c, self.cell(r, c)

    def map_weights(self, fn) -> "CellGrid":
        n = self.order
        planes = []
        for plane in (self.w, self.x, self.y, self.z):
            planes.append([[fn(plane[i][j]) for j in range(n)] for i in range(n)])
        return CellGrid(n, *planes)

    def to_float(self) -> "CellGrid":
        from .scalars import ZeroWeight

        n = self.order
        planes = []
        for plane in (self.w, self.x, self.y, self.z):
            arr = np.empty((n, n), dtype=np.float64)
            for i in range(n):
                for j in range(n):
                    v = plane[i][j]
                    if _scalar_is_zero(v):
                        raise ZeroWeight("float64 backend does not support zero weights")
                    arr[i, j] = float(v)
            planes.append(arr)
        return CellGrid(n, *planes)


_SLOT_LETTER = {NW: "w", NE: "x", SW: "y", SE: "z"}


def grid_from_cells(order: int, weight_fn) -> CellGrid:
    """Build a grid by calling weight_fn(r, c) -> CellWeights (1-based)."""
    rows = [[weight_fn(r, c) for c in range(1, order + 1)] for r in range(1, order + 1)]
    planes = []
    for letter in range(4):
        planes.append([[rows[i][j][letter] for j in range(order)] for i in range(order)])
    return CellGrid(order, *planes)


def all_ones(order: int) -> CellGrid:
    one = Fraction(1)
    return grid_from_cells(order, lambda r, c: CellWeights(one, one, one, one))


def cell_center(n: int, r: int, c: int) -> tuple[int, int]:
    return 2 * c - n - 1, n + 1 - 2 * r


def edge_vertices(n: int, e: EdgeRef) -> frozenset[tuple[int, int]]:
    """The two lattice endpoints of an edge, in diamond coordinates."""
    r, c, slot = e
    if not (1 <= r <= n and 1 <= c <= n) or slot not in OPPOSITE:
        raise InvalidEdge(f"edge {e} invalid for order {n}")
    cx, cy = cell_center(n, r, c)
    north = (cx, cy + 1)
    south = (cx, cy - 1)
    west = (cx - 1, cy)
    east = (cx + 1, cy)
    if slot == NW:
        return frozenset((west, north))
    if slot == NE:
        return frozenset((north, east))
    if slot == SW:
        return frozenset((west, south))
    return frozenset((south, east))


def vertices_to_edge(n: int, u: tuple[int, int], v: tuple[int, int]) -> EdgeRef:
    """Inverse of edge_vertices for an adjacent lattice pair."""
    (ux, uy), (vx, vy) = u, v
    if abs(ux - vx) != 1 or abs(uy - vy) != 1:
        raise InvalidEdge(f"{u}-{v} is not a lattice edge")
    # The cell center is the endpoint-midpoint shifted perpendicular to the
    # edge; exactly one of the two candidates is an even-sum cell center.
    mx2, my2 = ux + vx, uy + vy  # doubled midpoint (both odd)
    dx, dy = vx - ux, vy - uy
    for sign in (1, -1):
        cx, cy = (mx2 + sign * dy) // 2, (my2 - sign * dx) // 2
        c2, r2 = cx + n + 1, n + 1 - cy
        if c2 % 2 == 0 and r2 % 2 == 0 and 1 <= r2 // 2 <= n and 1 <= c2 // 2 <= n:
            r, c = r2 // 2, c2 // 2
            for slot in SLOTS:
                e = EdgeRef(r, c, slot)
                if edge_vertices(n, e) == frozenset((u, v)):
                    return e
    raise InvalidEdge(f"{u}-{v} is not an edge of the order-{n} diamond")


def aztec_vertices(n: int) -> list[tuple[int, int]]:
    return [
        (i, j)
        for i in range(-n, n + 1)
        for j in range(-n, n + 1)
        if (i + j) % 2 != 0
    ]


def all_edges(n: int) -> list[EdgeRef]:
    return [
        EdgeRef(r, c, slot)
        for r in range(1, n + 1)
        for c in range(1, n + 1)
        for slot in SLOTS
    ]


def slot_map_small_to_large(r: int, c: int, slot: str) -> EdgeRef:
    """Map an edge of the order-(n-1) diamond, embedded concentrically, to
    the order-n edge occupying the same lattice segment."""
    if slot == NW:
        return EdgeRef(r, c, SE)
    if slot == NE:
        return EdgeRef(r, c + 1, SW)
    if slot == SW:
        return EdgeRef(r + 1, c, NE)
    return EdgeRef(r + 1, c + 1, NW)


def slot_map_large_to_small(r: int, c: int, slot: str) -> EdgeRef | None:
    """Inverse of slot_map_small_to_large; None for outer-flank edges."""
    if slot == SE:
        s = EdgeRef(r, c, NW)
    elif slot == SW:
        s = EdgeRef(r, c - 1, NE)
    elif slot == NE:
        s = EdgeRef(r - 1, c, SW)
    else:
        s = EdgeRef(r - 1, c - 1, SE)
    return s if s.r >= 1 and s.c >= 1 else None


@dataclass(frozen=True)
class Matching:
    """A set of vertex-disjoint edges of the order-n diamond."""

    order: int
    edges: frozenset[EdgeRef] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(self.edges))

    def check_disjoint(self) -> None:
        seen = set()
        for e in self.edges:
            for v in edge_vertices(self.order, e):
                if v in seen:
                    raise InvalidMatching(f"vertex {v} covered twice")
                seen.add(v)

    def is_perfect(self) -> bool:
        if len(self.edges) != self.order * (self.order + 1):
            return False
        try:
            self.check_disjoint()
        except InvalidMatching:
            return False
        return True

    def sorted_edges(self) -> list[EdgeRef]:
        return sorted(self.edges, key=lambda e: (e.r, e.c, SLOTS.index(e.slot)))


# -- JSON --------------------------------------------------------------------

def grid_to_json(grid: CellGrid) -> dict:
    return {
        "order": grid.order,
        "cells": [
            [
                {
                    "w": format_scalar(grid.w[i][j]),
                    "x": format_scalar(grid.x[i][j]),
                    "y": format_scalar(grid.y[i][j]),
                    "z": format_scalar(grid.z[i][j]),
                }
                for j in range(grid.order)
            ]
            for i in range(grid.order)
        ],
    }


def grid_from_json(data: dict) -> CellGrid:
    order = int(data["order"])
    cells = data["cells"]
    if len(cells) != order or any(len(row) != order for row in cells):
        raise ValueError("cells array is not order x order")

    def weights(r, c):
        raw = cells[r - 1][c - 1]
        return CellWeights(*(parse_scalar(raw[k]) for k in ("w", "x", "y", "z")))

    return grid_from_cells(order, weights)


def matching_to_json(m: Matching) -> dict:
    return {
        "order": m.order,
        "edges": [[e.r, e.c, e.slot] for e in m.sorted_edges()],
    }


def matching_from_json(data: dict) -> Matching:
    edges = frozenset(EdgeRef(int(r), int(c), str(slot)) for r, c, slot in data["edges"])
    return Matching(int(data["order"]), edges)
