"""Embedding square grids, hexagon honeycombs and fortresses into
weighted Aztec diamonds, and lifting diamond matchings back to tilings.

Grids and honeycombs use 0/1 weightings: the region's graph is laid out
inside the diamond, every remaining vertex is paired off by an isolated
weight-1 edge, and everything else gets weight 0.  The isolated edges
are forced, so positive-weight matchings of the diamond correspond
one-to-one to matchings of the region.

A fortress of order n is an n x n array of diagonally cut unit squares
with alternate boundary triangles removed; its dual is a squares-and-
octagons graph.  Applying urban renewal to every other city turns that
dual into the order-n diamond in which renewed cities became all-t cells
and the others all-1 cells (t = 1/2 for plain counting), at the cost of
one factor wz + xy per renewed city, which the embedding accumulates in
its prefactor.  The lift inverts each city's renewal, flipping a fair
coin (weight-proportional in general) for cities whose four corners all
match outward.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .grid import (
    NW, NE, SW, SE, SLOTS,
    CellGrid, CellWeights, EdgeRef, InvalidMatching, Matching,
    aztec_vertices, all_edges, edge_vertices, grid_from_cells, vertices_to_edge,
)
from .oracle import SmallGraph


@dataclass(frozen=True)
class GridSpec:
    m: int  # even side length of the square grid

    def __post_init__(self):
        if self.m < 2 or self.m % 2:
            raise ValueError("grid side must be even and >= 2")


@dataclass(frozen=True)
class HexagonSpec:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 1:
            raise ValueError("hexagon sides must be >= 1")


@dataclass(frozen=True)
class FortressSpec:
    n: int
    t: Fraction = Fraction(1, 2)
    phase: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("fortress order must be >= 2")
        if self.t <= 0:
            raise ValueError("t must be positive")
        if self.phase not in (0, 1):
            raise ValueError("phase is 0 or 1")


RegionSpec = GridSpec | HexagonSpec | FortressSpec


@dataclass
class Embedding:
    """A region realized as a weighted diamond.

    region count = prefactor * count_matchings(target).  ``dual`` is the
    region's dual graph; a tiling is one of its perfect matchings.
    ``edge_map`` sends directly-corresponding diamond edges to dual
    edges; ``forced`` diamond edges are dropped by the lift; renewed
    fortress cells are inverted case by case.
    """

    spec: RegionSpec
    target: CellGrid
    prefactor: Fraction
    dual: SmallGraph
    edge_map: dict[EdgeRef, tuple]
    forced: frozenset[EdgeRef]
    renewed_cells: frozenset[tuple[int, int]] = frozenset()


@dataclass(frozen=True)
class RegionTiling:
    """A tiling, as a perfect matching of the region's dual graph."""

    kind: str
    edges: frozenset  # of frozenset({u, v})

    def check_perfect(self, dual: SmallGraph) -> None:
        seen = set()
        for pair in self.edges:
            for v in pair:
                if v in seen:
                    raise InvalidMatching(f"dual vertex {v} covered twice")
                seen.add(v)
        if seen != set(dual.vertices):
            raise InvalidMatching("tiling does not cover the region")


def _zero_one_grid(order: int, ones: set[EdgeRef]) -> CellGrid:
    def weights(r, c):
        vals = [Fraction(1) if EdgeRef(r, c, s) in ones else Fraction(0) for s in SLOTS]
        return CellWeights(*vals)

    return grid_from_cells(order, weights)


# -- square grids --------------------------------------------------------------

def embed_grid(m: int) -> Embedding:
    spec = GridSpec(m)
    n_half = m // 2
    order = 2 * n_half - 1

    def in_band(v):
        return abs(v[0]) + abs(v[1]) <= order

    forced_pairs = _grid_corner_pairs(order)
    forced = frozenset(vertices_to_edge(order, u, v) for u, v in forced_pairs)

    edge_map: dict[EdgeRef, tuple] = {}
    ones = set(forced)
    for e in all_edges(order):
        u, v = sorted(edge_vertices(order, e))
        if in_band(u) and in_band(v):
            ones.add(e)
            edge_map[e] = (_grid_label(order, u), _grid_label(order, v))

    dual = _square_grid_graph(m)
    return Embedding(spec, _zero_one_grid(order, ones), Fraction(1), dual, edge_map, forced)


def _grid_label(order: int, v) -> tuple[int, int]:
    i, j = v
    return ((i - j + order) // 2 + 1, (i + j + order) // 2 + 1)


def _grid_corner_pairs(order: int):
    """Isolated edges pairing the vertices outside the grid band,
    consecutively along each diagonal of the four corner triangles."""
    pairs = []
    for s in range(order + 2, 2 * order, 2):
        for i in range(s - order, order, 2):  # i+j = s (top-right)
            pairs.append(((i, s - i), (i + 1, s - i - 1)))
        for i in range(-order, order - s, 2):  # i+j = -s (bottom-left)
            pairs.append(((i, -s - i), (i + 1, -s - i - 1)))
        for i in range(-order, order - s, 2):  # i-j = -s (top-left)
            pairs.append(((i, i + s), (i + 1, i + 1 + s)))
        for i in range(s - order, order, 2):  # i-j = s (bottom-right)
            pairs.append(((i, i - s), (i + 1, i + 1 - s)))
    return pairs


def _square_grid_graph(m: int) -> SmallGraph:
    verts = [(a, b) for a in range(1, m + 1) for b in range(1, m + 1)]
    edges = []
    for a in range(1, m + 1):
        for b in range(1, m + 1):
            if b < m:
                edges.append(((a, b), (a, b + 1), Fraction(1)))
            if a < m:
                edges.append(((a, b), (a + 1, b), Fraction(1)))
    return SmallGraph(verts, edges)


# -- hexagon honeycombs ---------------------------------------------------------

def hexagon_graph(a: int, b: int, c: int) -> SmallGraph:
    """The honeycomb H(a, b, c): vertices are the unit triangles of the
    (a, b, c, a, b, c)-hexagon, adjacent when they share an edge.

    Triangles are labeled (strip, center) where ``strip`` counts rows
    from the top and ``center`` is the doubled x-coordinate of the
    triangle's center; consecutive centers within a strip share an edge.
    """
    strips, _ = _hexagon_strips(a, b, c)
    verts = [(k, mctr) for k, row in enumerate(strips, start=1) for mctr, _up in row]
    edges = []
    for k, row in enumerate(strips, start=1):
        for (m1, _), (m2, _) in zip(row, row[1:]):
            edges.append(((k, m1), (k, m2), Fraction(1)))
    for k in range(1, len(strips)):
        ups = {mctr for mctr, up in strips[k - 1] if up}
        downs = {mctr for mctr, up in strips[k] if not up}
        for mctr in sorted(ups & downs):
            edges.append(((k, mctr), (k + 1, mctr), Fraction(1)))
    return SmallGraph(verts, edges)


def _hexagon_strips(a: int, b: int, c: int):
    """Strip k (1-based, top to bottom) as a sorted list of
    (center, is_up) triangles, plus the line offsets used for layout."""
    rows = b + c
    x2 = [0]
    r2 = [2 * a]
    for k in range(1, rows + 1):
        x2.append(x2[-1] + (-1 if k <= b else 1))
        r2.append(r2[-1] + (1 if k <= c else -1))
    strips = []
    for k in range(1, rows + 1):
        tris = []
        n_down = (r2[k - 1] - x2[k - 1]) // 2
        n_up = (r2[k] - x2[k]) // 2
        for s in range(1, n_down + 1):
            tris.append((x2[k - 1] + 2 * s - 1, False))
        for s in range(1, n_up + 1):
            tris.append((x2[k] + 2 * s - 1, True))
        tris.sort()
        strips.append(tris)
    return strips, x2


def embed_hexagon(a: int, b: int, c: int) -> Embedding:
    spec = HexagonSpec(a, b, c)
    order = a + b + c - 1
    strips, _ = _hexagon_strips(a, b, c)
    rows = b + c

    # Diamond placement: strip k goes on the northeast-going line
    # d = i - j = d0 + 2(k-1); triangle centers map to s = i + j affinely,
    # so in-strip neighbors are NE steps and cross-strip pairs SE steps.
    d0 = -(rows - 1) if rows % 2 == 0 else -rows
    m0 = [min(row)[0] - 1 for row in strips]  # center just left of each strip
    c_shift = -(2 * order - 1) - 2 * min(mm + 1 for mm in m0)
    vertex_of: dict[tuple, tuple[int, int]] = {}
    for k, row in enumerate(strips, start=1):
        d = d0 + 2 * (k - 1)
        for mctr, _up in row:
            s = c_shift + 2 * mctr
            i, j = (s + d) // 2, (s - d) // 2
            if abs(i) > order or abs(j) > order:
                raise AssertionError(f"hexagon does not fit at ({i}, {j})")
            vertex_of[(k, mctr)] = (i, j)
    if len(set(vertex_of.values())) != len(vertex_of):
        raise AssertionError("hexagon placement is not injective")

    dual = hexagon_graph(a, b, c)
    edge_map: dict[EdgeRef, tuple] = {}
    ones: set[EdgeRef] = set()
    for u, v, _wt in dual.edges:
        e = vertices_to_edge(order, vertex_of[u], vertex_of[v])
        ones.add(e)
        edge_map[e] = (u, v)

    forced = frozenset(_pair_leftovers(order, set(vertex_of.values())))
    ones |= forced
    return Embedding(spec, _zero_one_grid(order, ones), Fraction(1), dual, edge_map, forced)


def _pair_leftovers(order: int, taken: set[tuple[int, int]]) -> set[EdgeRef]:
    """Pair every diamond vertex outside ``taken`` with isolated edges.

    Scan northeast-going lines left to right: adjacent free vertices pair
    within the line; a stranded vertex pairs with its southeast neighbor
    on the next line.
    """
    free = {v for v in aztec_vertices(order) if v not in taken}
    used: set[tuple[int, int]] = set()
    pairs: set[EdgeRef] = set()
    for d in range(-(2 * order - 1), 2 * order, 2):
        line = sorted(v for v in free if v[0] - v[1] == d and v not in used)
        idx = 0
        while idx < len(line):
            v = line[idx]
            nxt = line[idx + 1] if idx + 1 < len(line) else None
            if nxt is not None and nxt[0] == v[0] + 1 and nxt[1] == v[1] + 1:
                pairs.add(vertices_to_edge(order, v, nxt))
                idx += 2
                continue
            se = (v[0] + 1, v[1] - 1)
            if se not in free or se in used:
                raise AssertionError(f"cannot pair leftover vertex {v}")
            pairs.add(vertices_to_edge(order, v, se))
            used.add(se)
            idx += 1
    return pairs


# -- fortresses -----------------------------------------------------------------

_PARTS = ("N", "E", "S", "W")


def _fortress_sigma(n: int, phase: int) -> int:
    """Checkerboard class (i+j) % 2 of the renewed cities."""
    base = 1 if n % 4 == 3 else 0
    return (base + phase) % 2 if n % 2 else phase


def fortress_dual_graph(n: int, phase: int = 0, t: Fraction = Fraction(1, 2)) -> SmallGraph:
    """Squares-and-octagons dual of the order-n fortress.

    Vertices are triangles (i, j, part): square (i, j) of the n x n
    array (row i from top), quarter ``part`` in N/E/S/W.  Boundary
    triangles of renewed-class squares are the removed ones.  Inner
    edges of renewed squares carry weight 1/(2t) so that renewal lands
    on all-t cells; everything else has weight 1.
    """
    sigma = _fortress_sigma(n, phase)
    u = 1 / (2 * Fraction(t))

    def renewed(i, j):
        return (i + j) % 2 == sigma

    def exists(i, j, part):
        if not renewed(i, j):
            return True
        if part == "N" and i == 1:
            return False
        if part == "S" and i == n:
            return False
        if part == "W" and j == 1:
            return False
        if part == "E" and j == n:
            return False
        return True

    verts = [
        (i, j, p)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        for p in _PARTS
        if exists(i, j, p)
    ]
    vset = set(verts)
    edges = []
    ring = [("N", "E"), ("E", "S"), ("S", "W"), ("W", "N")]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            wt = u if renewed(i, j) else Fraction(1)
            for p1, p2 in ring:
                if (i, j, p1) in vset and (i, j, p2) in vset:
                    edges.append(((i, j, p1), (i, j, p2), wt))
            if i < n and (i, j, "S") in vset and (i + 1, j, "N") in vset:
                edges.append(((i, j, "S"), (i + 1, j, "N"), Fraction(1)))
            if j < n and (i, j, "E") in vset and (i, j + 1, "W") in vset:
                edges.append(((i, j, "E"), (i, j + 1, "W"), Fraction(1)))
    return SmallGraph(verts, edges)


def embed_fortress(n: int, t: Fraction = Fraction(1, 2), phase: int = 0) -> Embedding:
    spec = FortressSpec(n, Fraction(t), phase)
    sigma = _fortress_sigma(n, phase)
    t = Fraction(t)
    u = 1 / (2 * t)

    renewed = {
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if (i + j) % 2 == sigma
    }

    def weights(r, c):
        v = t if (r, c) in renewed else Fraction(1)
        return CellWeights(v, v, v, v)

    target = grid_from_cells(n, weights)
    prefactor = (2 * u * u) ** len(renewed)
    dual = fortress_dual_graph(n, phase, t)

    edge_map: dict[EdgeRef, tuple] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if (i, j) in renewed:
                continue
            edge_map[EdgeRef(i, j, NW)] = ((i, j, "N"), (i, j, "W"))
            edge_map[EdgeRef(i, j, NE)] = ((i, j, "N"), (i, j, "E"))
            edge_map[EdgeRef(i, j, SW)] = ((i, j, "W"), (i, j, "S"))
            edge_map[EdgeRef(i, j, SE)] = ((i, j, "S"), (i, j, "E"))
    return Embedding(
        spec, target, prefactor, dual, edge_map, frozenset(), frozenset(renewed)
    )


# Leg and inner-edge tables for inverting one city's renewal.  Keys are
# the cell corners matched inside the cell (N/W/E/S tags); values list
# dual edges relative to square (i, j).
_LEG = {
    "N": lambda i, j: ((i - 1, j, "S"), (i, j, "N")),
    "W": lambda i, j: ((i, j - 1, "E"), (i, j, "W")),
    "E": lambda i, j: ((i, j + 1, "W"), (i, j, "E")),
    "S": lambda i, j: ((i + 1, j, "N"), (i, j, "S")),
}
_SLOT_CORNERS = {NW: ("N", "W"), NE: ("N", "E"), SW: ("W", "S"), SE: ("S", "E")}
_INNER_FOR = {
    frozenset(("N", "W")): ("E", "S"),
    frozenset(("N", "E")): ("W", "S"),
    frozenset(("W", "S")): ("N", "E"),
    frozenset(("S", "E")): ("N", "W"),
}


def lift_matching(m: Matching, emb: Embedding, rng=None) -> RegionTiling:
    """Translate a perfect matching of the embedding target back into a
    tiling of the region.

    Fortress cities with no matched cell edge are inverted randomly (the
    two inner pairings, weighted by the city's wz : xy); rng is required
    exactly when such cities can occur.
    """
    if not m.is_perfect():
        raise InvalidMatching("lift needs a perfect matching")
    kind = type(emb.spec).__name__.removesuffix("Spec").lower()
    dual_vertices = set(emb.dual.vertices)
    out: set[frozenset] = set()
    by_cell: dict[tuple[int, int], list[EdgeRef]] = {}
    for e in m.edges:
        if e in emb.forced:
            continue
        if (e.r, e.c) in emb.renewed_cells:
            by_cell.setdefault((e.r, e.c), []).append(e)
            continue
        if e not in emb.edge_map:
            raise InvalidMatching(f"matched edge {e} has weight 0 in the embedding")
        out.add(frozenset(emb.edge_map[e]))
    if emb.forced - m.edges:
        raise InvalidMatching("matching omits a forced edge")

    n = emb.target.order
    for (i, j) in sorted(emb.renewed_cells):
        slots = [e.slot for e in by_cell.get((i, j), [])]
        inward = frozenset(tag for s in slots for tag in _SLOT_CORNERS[s])
        for tag in inward:
            a, b = _LEG[tag](i, j)
            if a in dual_vertices:  # pendant legs vanish with the removed triangle
                out.add(frozenset((a, b)))
        if len(slots) == 2:
            continue  # all four corners matched inward: four legs, no inner edge
        if len(slots) == 1:
            inner = _INNER_FOR[inward]
        elif not slots:
            if rng is None:
                raise ValueError("rng required: city with all corners outward")
            cw = emb.target.cell(i, j)
            bias = cw.w * cw.z / (cw.w * cw.z + cw.x * cw.y)
            inner = None
            pairs = ((("N", "W"), ("E", "S")), (("N", "E"), ("W", "S")))
            chosen = pairs[0] if rng.creation_choice(bias) else pairs[1]
            for p1, p2 in chosen:
                a, b = (i, j, p1), (i, j, p2)
                if a not in dual_vertices or b not in dual_vertices:
                    raise InvalidMatching(f"inner edge on removed triangle at {(i, j)}")
                out.add(frozenset((a, b)))
            continue
        else:
            raise InvalidMatching(f"{len(slots)} matched edges in cell {(i, j)}")
        a, b = (i, j, inner[0]), (i, j, inner[1])
        if a not in dual_vertices or b not in dual_vertices:
            raise InvalidMatching(f"inner edge on removed triangle at {(i, j)}")
        out.add(frozenset((a, b)))

    tiling = RegionTiling(kind, frozenset(out))
    tiling.check_perfect(emb.dual)
    return tiling


# -- the four-class weighting behind the generating functions -------------------

def four_class_weighting(n: int, t: Fraction) -> CellGrid:
    """Order-n diamond weights with horizontal (NW/SE) and vertical
    (NE/SW) slot weights alternating between 1 and t by position parity,
    the extreme-most edges getting t exactly when n is 1 or 2 mod 4.

    For odd n this is a fortress weighting (all-t and all-1 cells); the
    even orders are the patterns the odd ones reduce to.
    """
    t = Fraction(t)
    phi = 0 if n % 4 in (1, 2) else 1

    def weights(r, c):
        horiz = t if (c - r) % 2 == phi else Fraction(1)
        vert = t if (n + 1 - r - c) % 2 == phi else Fraction(1)
        return CellWeights(horiz, vert, vert, horiz)

    return grid_from_cells(n, weights)


def bond_index(n: int, r: int, c: int) -> tuple[int, int]:
    """(i, j) position of cell (r, c)'s north-going (NW) bond in the
    rotated frame the generating functions are written in."""
    return c - r, n + 1 - r - c


def cell_of_bond(n: int, i: int, j: int) -> tuple[int, int]:
    r2, c2 = n + 1 - i - j, i - j + n + 1
    if r2 % 2 or c2 % 2:
        raise ValueError(f"({i}, {j}) is not a bond index at order {n}")
    r, c = r2 // 2, c2 // 2
    if not (1 <= r <= n and 1 <= c <= n):
        raise ValueError(f"({i}, {j}) outside the order-{n} diamond")
    return r, c


# -- region grammar -------------------------------------------------------------

def parse_region(text: str) -> RegionSpec | int:
    """Parse "grid:4", "hex:2,2,2", "fortress:3:t=1/2:phase=0", "aztec:5".

    "aztec:n" (the all-ones diamond) is returned as the bare order n.
    """
    head, _, rest = text.partition(":")
    head = head.lower()
    if head == "aztec":
        return int(rest)
    if head == "grid":
        return GridSpec(int(rest))
    if head in ("hex", "hexagon"):
        a, b, c = (int(v) for v in rest.split(","))
        return HexagonSpec(a, b, c)
    if head == "fortress":
        parts = rest.split(":")
        n = int(parts[0])
        t = Fraction(1, 2)
        phase = 0
        for p in parts[1:]:
            key, _, val = p.partition("=")
            if key == "t":
                t = Fraction(val)
            elif key == "phase":
                phase = int(val)
            else:
                raise ValueError(f"unknown fortress option {key!r}")
        return FortressSpec(n, t, phase)
    raise ValueError(f"unknown region {text!r}")


def build_embedding(spec: RegionSpec) -> Embedding:
    if isinstance(spec, GridSpec):
        return embed_grid(spec.m)
    if isinstance(spec, HexagonSpec):
        return embed_hexagon(spec.a, spec.b, spec.c)
    return embed_fortress(spec.n, spec.t, spec.phase)
